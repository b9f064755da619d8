#include "msteiner/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "msteiner/errors.hpp"

namespace msteiner::generators {

namespace {

double unit_weight(std::mt19937_64& rng) {
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void assign_terminals(Instance::Data& d, std::int32_t terminals, const PrizeRange& prizes, std::mt19937_64& rng) {
  if (terminals < 0 || terminals > d.num_vertices)
    throw ConfigError("terminal count " + std::to_string(terminals) + " exceeds vertex count " +
                      std::to_string(d.num_vertices));
  std::vector<Vertex> order(d.num_vertices);
  std::iota(order.begin(), order.end(), 0);
  for (std::int32_t k = 0; k < terminals; ++k) {
    std::uniform_int_distribution<std::int32_t> pick(k, d.num_vertices - 1);
    std::swap(order[k], order[pick(rng)]);
  }
  order.resize(terminals);
  std::sort(order.begin(), order.end());
  d.prizes.assign(d.num_vertices, 0.0);
  if (prizes) {
    if (!(prizes->first >= 0.0) || !(prizes->second >= prizes->first)) throw ConfigError("invalid prize range");
    std::uniform_real_distribution<double> prize(prizes->first, prizes->second);
    for (Vertex v : order) d.prizes[v] = prize(rng);
    d.kind = ProblemKind::PCSPG;
  } else {
    d.terminal.assign(d.num_vertices, 0);
    for (Vertex v : order) d.terminal[v] = 1;
    d.kind = ProblemKind::SPG;
  }
}

}  // namespace

Instance grid(std::int32_t nx, std::int32_t ny, std::int32_t nz, std::int32_t terminals, PrizeRange prizes,
              std::uint64_t seed) {
  if (nx < 1 || ny < 1 || nz < 1) throw ConfigError("grid dimensions must be positive");
  std::mt19937_64 rng(seed);
  Instance::Data d;
  d.num_vertices = nx * ny * nz;
  auto id = [&](std::int32_t x, std::int32_t y, std::int32_t z) { return x + nx * (y + ny * z); };
  for (std::int32_t z = 0; z < nz; ++z)
    for (std::int32_t y = 0; y < ny; ++y)
      for (std::int32_t x = 0; x < nx; ++x) {
        const Vertex v = id(x, y, z);
        auto link = [&](Vertex u) {
          const double w = unit_weight(rng);
          d.edges.push_back({v, u, w, w});
        };
        if (x + 1 < nx) link(id(x + 1, y, z));
        if (y + 1 < ny) link(id(x, y + 1, z));
        if (z + 1 < nz) link(id(x, y, z + 1));
      }
  assign_terminals(d, terminals, prizes, rng);
  d.name = "grid_" + std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nz) + "_s" +
           std::to_string(seed);
  return Instance(std::move(d));
}

Instance scale_free(std::int32_t n, std::int32_t m, std::int32_t terminals, PrizeRange prizes, std::uint64_t seed) {
  if (m < 1 || n < m) throw ConfigError("scale-free generation needs 1 <= m <= n");
  std::mt19937_64 rng(seed);
  Instance::Data d;
  d.num_vertices = n;
  std::vector<Vertex> endpoints;  // each vertex repeated once per incident edge
  auto link = [&](Vertex a, Vertex b) {
    const double w = unit_weight(rng);
    d.edges.push_back({a, b, w, w});
    endpoints.push_back(a);
    endpoints.push_back(b);
  };
  for (Vertex a = 0; a < m; ++a)
    for (Vertex b = a + 1; b < m; ++b) link(a, b);
  std::vector<Vertex> targets;
  for (Vertex v = m; v < n; ++v) {
    targets.clear();
    while (static_cast<std::int32_t>(targets.size()) < m) {
      Vertex t;
      if (endpoints.empty()) {
        t = std::uniform_int_distribution<Vertex>(0, v - 1)(rng);
      } else {
        t = endpoints[std::uniform_int_distribution<std::size_t>(0, endpoints.size() - 1)(rng)];
      }
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Vertex t : targets) link(v, t);
  }
  assign_terminals(d, terminals, prizes, rng);
  d.name = "sf_n" + std::to_string(n) + "_m" + std::to_string(m) + "_s" + std::to_string(seed);
  return Instance(std::move(d));
}

}  // namespace msteiner::generators
