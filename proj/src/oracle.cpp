#include "msteiner/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "msteiner/errors.hpp"
#include "msteiner/extended.hpp"

namespace msteiner::oracle {

namespace {

struct DisjointSets {
  std::vector<Vertex> parent;
  explicit DisjointSets(Vertex n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  Vertex find(Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

double slot_weight(const Instance& inst, std::span<const double> w, Slot s) {
  return w.empty() ? inst.weight(s) : w[s];
}

bool symmetric(const Instance& inst) {
  for (Slot s = 0; s < inst.num_slots(); s += 2)
    if (inst.weight(s) != inst.weight(s + 1)) return false;
  return true;
}

// Orients an undirected edge set toward the root; returns false unless it is a
// single tree containing the root.
bool orient(const Instance& inst, Vertex root, const std::vector<std::int32_t>& edge_ids, SolutionTree& tree) {
  const Vertex n = inst.num_vertices();
  std::vector<std::vector<std::pair<Vertex, std::int32_t>>> adj(n);
  for (auto k : edge_ids) {
    const auto& e = inst.edges()[k];
    adj[e.u].emplace_back(e.v, k);
    adj[e.v].emplace_back(e.u, k);
  }
  tree = SolutionTree::singleton(root, n);
  std::vector<Vertex> stack{root};
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (auto [u, k] : adj[v]) {
      if (u == tree.parent[v]) continue;
      if (tree.member[u]) return false;  // cycle
      tree.member[u] = 1;
      tree.parent[u] = v;
      ++reached;
      stack.push_back(u);
    }
  }
  return reached == edge_ids.size() + 1;
}

double tree_cost(const Instance& inst, const SolutionTree& t) {
  double cost = 0.0;
  for (Vertex i = 0; i < inst.num_vertices(); ++i) {
    if (!t.member[i]) {
      cost += inst.prize(i);
    } else if (i != t.root) {
      for (Slot s : inst.out_slots(i))
        if (inst.head(s) == t.parent[i]) cost += inst.weight(s);
    }
  }
  return cost;
}

}  // namespace

Optimum brute_force_optimum(const Instance& inst) {
  const Vertex root = inst.require_root();
  const Vertex n = inst.num_vertices();
  const auto m = inst.num_edges();
  Optimum best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<std::pair<Vertex, Vertex>> best_edges;

  auto consider = [&](const SolutionTree& t) {
    const double c = tree_cost(inst, t);
    auto edges = t.edges();
    for (auto& e : edges)
      if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    if (c < best.cost || (c == best.cost && edges < best_edges)) {
      best.cost = c;
      best.tree = t;
      best_edges = std::move(edges);
    }
  };

  if (n <= 14 && symmetric(inst)) {
    // every vertex subset containing the root, spanned by its Kruskal tree
    std::vector<std::int32_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
      const auto& ea = inst.edges()[a];
      const auto& eb = inst.edges()[b];
      return std::tie(ea.weight_uv, ea.u, ea.v) < std::tie(eb.weight_uv, eb.u, eb.v);
    });
    std::vector<Vertex> others;
    for (Vertex v = 0; v < n; ++v)
      if (v != root) others.push_back(v);
    const std::uint32_t subsets = 1u << others.size();
    std::vector<char> in(n);
    std::vector<std::int32_t> chosen;
    SolutionTree t;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      std::fill(in.begin(), in.end(), 0);
      in[root] = 1;
      std::size_t size = 1;
      for (std::size_t b = 0; b < others.size(); ++b)
        if (mask & (1u << b)) {
          in[others[b]] = 1;
          ++size;
        }
      DisjointSets ds(n);
      chosen.clear();
      for (auto k : order) {
        const auto& e = inst.edges()[k];
        if (in[e.u] && in[e.v] && ds.unite(e.u, e.v)) chosen.push_back(k);
      }
      if (chosen.size() + 1 != size) continue;
      if (orient(inst, root, chosen, t)) consider(t);
    }
  } else if (m <= 20) {
    std::vector<std::int32_t> chosen;
    SolutionTree t;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      chosen.clear();
      for (std::int32_t k = 0; k < m; ++k)
        if (mask & (1u << k)) chosen.push_back(k);
      if (chosen.size() >= static_cast<std::size_t>(n)) continue;
      if (orient(inst, root, chosen, t)) consider(t);
    }
  } else {
    throw BudgetError("instance too large for exhaustive enumeration");
  }
  return best;
}

Forest reference_mst(const Instance& inst, std::span<const double> slot_weights) {
  std::vector<std::tuple<double, Vertex, Vertex>> edges;
  for (std::int32_t k = 0; k < inst.num_edges(); ++k) {
    const double w = std::min(slot_weight(inst, slot_weights, 2 * k), slot_weight(inst, slot_weights, 2 * k + 1));
    const auto& e = inst.edges()[k];
    edges.emplace_back(w, std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(edges.begin(), edges.end());
  DisjointSets ds(inst.num_vertices());
  Forest f;
  for (const auto& [w, u, v] : edges) {
    if (ds.unite(u, v)) {
      f.cost += w;
      f.edges.emplace_back(u, v);
    }
  }
  std::sort(f.edges.begin(), f.edges.end());
  return f;
}

std::vector<double> reference_sssp(const Instance& inst, Vertex target, std::span<const double> slot_weights) {
  const Vertex n = inst.num_vertices();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  dist[target] = 0.0;
  for (Vertex round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (Slot s = 0; s < inst.num_slots(); ++s) {
      const double via = dist[inst.head(s)] + slot_weight(inst, slot_weights, s);
      if (via < dist[inst.tail(s)]) {
        dist[inst.tail(s)] = via;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

namespace {

// Local compatibility of the incoming depths d_ki around one vertex.
bool compatible(const std::vector<int>& incoming, bool is_root, bool flat_allowed) {
  if (is_root) return std::all_of(incoming.begin(), incoming.end(), [](int d) { return d == 0 || d == 1; });
  int parents = 0;
  int d = 0;
  for (int v : incoming)
    if (v < 0) {
      ++parents;
      d = -v;
    }
  if (parents == 0) return std::all_of(incoming.begin(), incoming.end(), [](int v) { return v == 0; });
  if (parents > 1) return false;
  bool normal = true;
  int same = 0;
  int other = 0;
  for (int v : incoming) {
    if (v < 0) continue;
    if (v != 0 && v != d + 1) normal = false;
    if (v == d) ++same;
    else if (v != 0) ++other;
  }
  return normal || (flat_allowed && same == 1 && other == 0);
}

}  // namespace

std::vector<double> exhaustive_update(const maxsum::VertexProblem& pb) {
  const int depth = pb.depth;
  const int width = 2 * depth + 1;
  const int deg = static_cast<int>(pb.weights.size());
  if (deg > 4 || depth > 3) throw BudgetError("exhaustive update limited to degree 4 and depth 3");
  const bool flat_allowed = pb.model == Model::Flat && pb.prize == 0.0 && !pb.is_root;
  std::vector<double> out(static_cast<std::size_t>(deg) * width, ext::kNeg);
  std::vector<int> incoming(deg);
  for (int j = 0; j < deg; ++j) {
    std::vector<int> others;
    for (int k = 0; k < deg; ++k)
      if (k != j) others.push_back(k);
    std::size_t tuples = 1;
    for (std::size_t t = 0; t < others.size(); ++t) tuples *= width;
    for (int dij = -depth; dij <= depth; ++dij) {
      double best = ext::kNeg;
      for (std::size_t code = 0; code < tuples; ++code) {
        incoming[j] = -dij;
        std::size_t c = code;
        for (int k : others) {
          incoming[k] = static_cast<int>(c % width) - depth;
          c /= width;
        }
        if (!compatible(incoming, pb.is_root, flat_allowed)) continue;
        double value = 0.0;
        const bool empty = std::all_of(incoming.begin(), incoming.end(), [](int v) { return v == 0; });
        if (empty && !pb.is_root) value -= pb.prize;
        for (int k = 0; k < deg; ++k)
          if (-incoming[k] > 0) value -= pb.weights[k];
        for (int k : others) value = ext::add(value, pb.inputs[static_cast<std::size_t>(k) * width + incoming[k] + depth]);
        best = std::max(best, value);
      }
      out[static_cast<std::size_t>(j) * width + dij + depth] = best;
    }
    maxsum::normalize(std::span<double>(out).subspan(static_cast<std::size_t>(j) * width, width));
  }
  return out;
}

maxsum::VertexProblem vertex_problem(const Instance& inst, const maxsum::EngineState& state, Vertex vertex,
                                     std::vector<double>& weights_buf, std::vector<double>& inputs_buf) {
  const auto slots = inst.out_slots(vertex);
  const int width = state.messages.width();
  weights_buf.resize(slots.size());
  inputs_buf.resize(slots.size() * width);
  for (std::size_t a = 0; a < slots.size(); ++a) {
    weights_buf[a] = state.weights[slots[a]];
    const Slot back = Instance::reverse(slots[a]);
    for (int k = 0; k < width; ++k)
      inputs_buf[a * width + k] = ext::add(state.messages.row(back)[k], state.feedback.row(back)[k]);
  }
  return {state.options.depth, state.options.model, vertex == state.root, inst.prize(vertex), weights_buf, inputs_buf};
}

std::vector<double> exhaustive_update(const Instance& inst, const maxsum::EngineState& state, Vertex vertex) {
  std::vector<double> w, in;
  return exhaustive_update(vertex_problem(inst, state, vertex, w, in));
}

}  // namespace msteiner::oracle
