#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "msteiner/instance.hpp"

namespace msteiner::testing {

/// Random connected graph: a random spanning tree plus extra edges.
inline std::vector<EdgeSpec> random_connected_edges(std::mt19937_64& rng, Vertex n, std::int32_t extra,
                                                    double lo = 0.0, double hi = 1.0, bool asymmetric = false) {
  std::uniform_real_distribution<double> weight(lo, hi);
  auto draw = [&] {
    double w = 0.0;
    while (w <= 0.0) w = weight(rng);
    return w;
  };
  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<EdgeSpec> edges;
  auto add = [&](Vertex a, Vertex b) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    if (a == b || !seen.insert(key).second) return;
    const double w = draw();
    edges.push_back({a, b, w, asymmetric ? draw() : w});
  };
  for (Vertex v = 1; v < n; ++v) add(v, std::uniform_int_distribution<Vertex>(0, v - 1)(rng));
  const std::int64_t max_edges = static_cast<std::int64_t>(n) * (n - 1) / 2;
  for (std::int32_t k = 0; k < extra && static_cast<std::int64_t>(edges.size()) < max_edges; ++k) {
    std::uniform_int_distribution<Vertex> pick(0, n - 1);
    add(pick(rng), pick(rng));
  }
  return edges;
}

/// Random PCSPG-style instance rooted at 0 with a fraction of prize-0 vertices.
inline Instance random_rstp(std::mt19937_64& rng, Vertex n, std::int32_t extra, double prize_hi,
                            double zero_fraction = 0.3) {
  Instance::Data d;
  d.num_vertices = n;
  d.edges = random_connected_edges(rng, n, extra);
  d.prizes.assign(n, 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Vertex v = 1; v < n; ++v)
    if (u(rng) >= zero_fraction) d.prizes[v] = u(rng) * prize_hi;
  d.root = 0;
  d.kind = ProblemKind::RSTP;
  return Instance(std::move(d));
}

/// Random SPG with `terminals` terminals (vertex 0 always one of them, used as root).
inline Instance random_spg(std::mt19937_64& rng, Vertex n, std::int32_t extra, std::int32_t terminals) {
  Instance::Data d;
  d.num_vertices = n;
  d.edges = random_connected_edges(rng, n, extra, 0.0, 1.0);
  d.prizes.assign(n, 0.0);
  d.terminal.assign(n, 0);
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  std::shuffle(all.begin() + 1, all.end(), rng);
  for (std::int32_t k = 0; k < terminals && k < n; ++k) d.terminal[all[k]] = 1;
  d.root = 0;
  d.kind = ProblemKind::SPG;
  return Instance(std::move(d));
}

}  // namespace msteiner::testing
