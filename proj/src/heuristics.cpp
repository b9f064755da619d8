#include "msteiner/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

#include "msteiner/extended.hpp"

namespace msteiner::heuristics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SolutionTree from_parents(Vertex root, std::vector<Vertex> parent) {
  SolutionTree t;
  t.root = root;
  t.member.assign(parent.size(), 0);
  for (std::size_t v = 0; v < parent.size(); ++v) t.member[v] = (parent[v] != kNoVertex) || static_cast<Vertex>(v) == root;
  parent[root] = kNoVertex;
  t.parent = std::move(parent);
  return t;
}

bool predicted_in(const maxsum::FieldSnapshot& snap, Vertex v) {
  return v == snap.root || snap.nodes.inclusion(v) > 0.0;
}

}  // namespace

double penalty_constant(const Instance& inst) { return inst.total_cost() + 1.0; }

ReweightedView raw_view(const Instance& inst) {
  ReweightedView view;
  view.weights.assign(inst.weights().begin(), inst.weights().end());
  view.penalty = penalty_constant(inst);
  return view;
}

ReweightedView reweight_edges(const Instance& inst, const maxsum::FieldSnapshot& snap) {
  ReweightedView view;
  view.penalty = penalty_constant(inst);
  view.weights.resize(inst.num_slots());
  const int depth = snap.local.depth();
  for (Slot s = 0; s < inst.num_slots(); ++s) {
    double best = ext::kNeg;
    for (int d = -depth; d <= depth; ++d)
      if (d != 0) best = std::max(best, snap.local.at(s, d));
    view.weights[s] = ext::is_neg(best) ? view.penalty : -best;
  }
  return view;
}

ReweightedView reweight_nodes(const Instance& inst, const maxsum::FieldSnapshot& snap) {
  ReweightedView view;
  view.penalty = penalty_constant(inst);
  view.forced.resize(inst.num_vertices());
  for (Vertex v = 0; v < inst.num_vertices(); ++v) view.forced[v] = predicted_in(snap, v);
  view.weights.resize(inst.num_slots());
  for (Slot s = 0; s < inst.num_slots(); ++s) {
    const bool inside = view.forced[inst.tail(s)] && view.forced[inst.head(s)];
    view.weights[s] = inst.weight(s) + (inside ? 0.0 : view.penalty);
  }
  return view;
}

SolutionTree prim_tree(const Instance& inst, Vertex root, std::span<const double> cost) {
  const Vertex n = inst.num_vertices();
  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<char> done(n, 0);
  using Entry = std::tuple<double, Vertex, Slot>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  auto relax_from = [&](Vertex u) {
    for (Slot s : inst.out_slots(u)) {
      const Vertex v = inst.head(s);
      const Slot up = Instance::reverse(s);
      if (!done[v]) heap.emplace(cost[up], v, up);
    }
  };
  done[root] = 1;
  relax_from(root);
  while (!heap.empty()) {
    const auto [c, v, up] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    parent[v] = inst.head(up);
    relax_from(v);
  }
  return from_parents(root, std::move(parent));
}

SolutionTree dijkstra_tree(const Instance& inst, Vertex root, std::span<const double> cost) {
  const Vertex n = inst.num_vertices();
  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<double> dist(n, kInf);
  std::vector<char> done(n, 0);
  using Entry = std::tuple<double, Vertex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[root] = 0.0;
  heap.emplace(0.0, root);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (Slot s : inst.out_slots(u)) {
      const Vertex v = inst.head(s);
      if (done[v]) continue;
      const double via = d + cost[Instance::reverse(s)];
      if (via < dist[v] || (via == dist[v] && u < parent[v])) {
        dist[v] = via;
        parent[v] = u;
        heap.emplace(via, v);
      }
    }
  }
  return from_parents(root, std::move(parent));
}

SolutionTree prune_leaves(const Instance& inst, SolutionTree tree) {
  const Vertex n = inst.num_vertices();
  std::vector<std::int32_t> children(n, 0);
  for (Vertex v = 0; v < n; ++v)
    if (tree.member[v] && v != tree.root) ++children[tree.parent[v]];
  std::vector<Vertex> leaves;
  for (Vertex v = n - 1; v >= 0; --v)
    if (tree.member[v] && v != tree.root && children[v] == 0) leaves.push_back(v);
  while (!leaves.empty()) {
    const Vertex v = leaves.back();
    leaves.pop_back();
    const Vertex p = tree.parent[v];
    const double w = inst.weight(*inst.find_slot(v, p));
    if (!(w > inst.prize(v))) continue;
    tree.member[v] = 0;
    tree.parent[v] = kNoVertex;
    if (--children[p] == 0 && p != tree.root) leaves.push_back(p);
  }
  return tree;
}

SolutionTree extract_mst(const Instance& inst, const ReweightedView& view) {
  return prune_leaves(inst, prim_tree(inst, inst.require_root(), view.weights));
}

SolutionTree extract_spt(const Instance& inst, const ReweightedView& view) {
  return prune_leaves(inst, dijkstra_tree(inst, inst.require_root(), view.weights));
}

namespace {

// Growth stage state. Vertex loads (the dual mass of the clusters containing the
// vertex) are kept as vertex_offset[v] + grown(top cluster), so activity changes
// cost nothing per member; merging relabels the smaller member list.
class GrowthStage {
 public:
  GrowthStage(const Instance& inst, std::span<const double> edge_costs, std::span<const double> prizes)
      : inst_(inst), cost_(edge_costs), root_(inst.require_root()) {
    const Vertex n = inst.num_vertices();
    top_.resize(n);
    offset_.assign(n, 0.0);
    for (Vertex v = 0; v < n; ++v) {
      Cluster c;
      c.members = {v};
      c.min_vertex = v;
      c.potential = v == root_ ? 0.0 : prizes[v];
      c.has_root = v == root_;
      c.active = !c.has_root && c.potential > 0.0;
      top_[v] = v;
      clusters_.push_back(std::move(c));
    }
    for (Vertex v = 0; v < n; ++v) {
      if (v == root_ || clusters_[v].active) continue;
      clusters_[v].dead = true;  // prize-0 singletons die at time 0
      death_order_.push_back(v);
    }
    for (Vertex v = 0; v < n; ++v)
      if (clusters_[v].active) {
        deaths_.emplace(clusters_[v].potential, v, v, clusters_[v].version);
        push_edges_of(clusters_[v].members);
      }
  }

  void run() {
    while (true) {
      const auto edge = next_edge();
      const auto death = next_death();
      if (!edge && !death) break;
      if (edge && (!death || edge->first <= death->first)) {
        now_ = std::max(now_, edge->first);
        merge(edge->second);
      } else {
        now_ = std::max(now_, death->first);
        kill(death->second);
      }
    }
  }

  struct Cluster {
    std::vector<Vertex> members;  // only maintained for top-level clusters
    std::vector<std::int32_t> children;
    Vertex min_vertex = 0;
    double potential = 0.0;  // at time `stamp` when active, frozen otherwise
    double stamp = 0.0;
    double grown_base = 0.0;
    bool active = false;
    bool dead = false;
    bool has_root = false;
    std::int32_t version = 0;
  };

  const std::vector<Cluster>& clusters() const { return clusters_; }
  const std::vector<std::int32_t>& death_order() const { return death_order_; }
  const std::vector<std::int32_t>& forest() const { return forest_; }

 private:
  double grown(const Cluster& c) const { return c.grown_base + (c.active ? now_ - c.stamp : 0.0); }
  double potential(const Cluster& c) const { return c.potential - (c.active ? now_ - c.stamp : 0.0); }
  double load(Vertex v) const { return offset_[v] + grown(clusters_[top_[v]]); }

  // Freezes the time-dependent parts of a cluster at the current time.
  void settle(Cluster& c) {
    c.grown_base = grown(c);
    c.potential = potential(c);
    c.stamp = now_;
  }

  std::optional<double> edge_time(std::int32_t k) const {
    const auto& e = inst_.edges()[k];
    const auto& a = clusters_[top_[e.u]];
    const auto& b = clusters_[top_[e.v]];
    if (top_[e.u] == top_[e.v]) return std::nullopt;
    const int rate = int(a.active) + int(b.active);
    if (rate == 0) return std::nullopt;
    const double slack = cost_[k] - load(e.u) - load(e.v);
    return now_ + std::max(0.0, slack) / rate;
  }

  void push_edges_of(const std::vector<Vertex>& vertices) {
    for (Vertex v : vertices)
      for (Slot s : inst_.out_slots(v)) {
        const std::int32_t k = s / 2;
        if (auto t = edge_time(k)) edges_.emplace(*t, k);
      }
  }

  std::optional<std::pair<double, std::int32_t>> next_edge() {
    while (!edges_.empty()) {
      const auto [t, k] = edges_.top();
      const auto actual = edge_time(k);
      if (!actual) {
        edges_.pop();
        continue;
      }
      if (*actual > t + 1e-12 * std::max(1.0, std::abs(t))) {
        edges_.pop();
        edges_.emplace(*actual, k);
        continue;
      }
      return std::make_pair(*actual, k);
    }
    return std::nullopt;
  }

  std::optional<std::pair<double, std::int32_t>> next_death() {
    while (!deaths_.empty()) {
      const auto [t, minv, c, version] = deaths_.top();
      const auto& cl = clusters_[c];
      if (!cl.active || cl.version != version || top_[cl.min_vertex] != c) {
        deaths_.pop();
        continue;
      }
      return std::make_pair(t, c);
    }
    return std::nullopt;
  }

  void merge(std::int32_t k) {
    edges_.pop();
    const auto& e = inst_.edges()[k];
    const std::int32_t a = top_[e.u];
    const std::int32_t b = top_[e.v];
    settle(clusters_[a]);
    settle(clusters_[b]);
    // an inactive side joining an active cluster speeds up its boundary edges
    std::vector<Vertex> refresh;
    for (auto side : {a, b})
      if (!clusters_[side].active)
        refresh.insert(refresh.end(), clusters_[side].members.begin(), clusters_[side].members.end());
    Cluster merged;
    merged.children = {a, b};
    merged.min_vertex = std::min(clusters_[a].min_vertex, clusters_[b].min_vertex);
    merged.potential = clusters_[a].potential + clusters_[b].potential;
    merged.has_root = clusters_[a].has_root || clusters_[b].has_root;
    merged.active = !merged.has_root;
    merged.stamp = now_;
    const std::int32_t id = static_cast<std::int32_t>(clusters_.size());
    // members of the larger side keep their offsets relative to its grown value
    const bool a_large = clusters_[a].members.size() >= clusters_[b].members.size();
    const std::int32_t big = a_large ? a : b;
    const std::int32_t small = a_large ? b : a;
    merged.grown_base = clusters_[big].grown_base;
    merged.members = std::move(clusters_[big].members);
    const double shift = clusters_[small].grown_base - merged.grown_base;
    for (Vertex v : clusters_[small].members) {
      offset_[v] += shift;
      merged.members.push_back(v);
    }
    clusters_[small].members.clear();
    clusters_[small].members.shrink_to_fit();
    clusters_.push_back(std::move(merged));
    for (Vertex v : clusters_[id].members) top_[v] = id;
    forest_.push_back(k);
    auto& c = clusters_[id];
    if (c.active) {
      deaths_.emplace(now_ + c.potential, c.min_vertex, id, c.version);
      push_edges_of(refresh);
    }
  }

  void kill(std::int32_t c) {
    deaths_.pop();
    auto& cl = clusters_[c];
    settle(cl);
    cl.potential = 0.0;
    cl.active = false;
    cl.dead = true;
    ++cl.version;
    death_order_.push_back(c);
  }

  const Instance& inst_;
  std::span<const double> cost_;
  Vertex root_;
  double now_ = 0.0;
  std::vector<Cluster> clusters_;
  std::vector<std::int32_t> top_;
  std::vector<double> offset_;
  std::vector<std::int32_t> death_order_;
  std::vector<std::int32_t> forest_;
  using EdgeEvent = std::pair<double, std::int32_t>;
  std::priority_queue<EdgeEvent, std::vector<EdgeEvent>, std::greater<>> edges_;
  using DeathEvent = std::tuple<double, Vertex, std::int32_t, std::int32_t>;
  std::priority_queue<DeathEvent, std::vector<DeathEvent>, std::greater<>> deaths_;
};

void collect_members(const std::vector<GrowthStage::Cluster>& clusters, std::int32_t c, Vertex n,
                     std::vector<Vertex>& out) {
  std::vector<std::int32_t> stack{c};
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    if (x < n) out.push_back(static_cast<Vertex>(x));
    for (auto ch : clusters[x].children) stack.push_back(ch);
  }
}

}  // namespace

SolutionTree goemans_williamson(const Instance& inst, std::span<const double> edge_costs,
                                std::span<const double> prizes) {
  const Vertex n = inst.num_vertices();
  const Vertex root = inst.require_root();
  GrowthStage growth(inst, edge_costs, prizes);
  growth.run();

  std::vector<std::vector<std::pair<Vertex, std::int32_t>>> adj(n);
  for (auto k : growth.forest()) {
    const auto& e = inst.edges()[k];
    adj[e.u].emplace_back(e.v, k);
    adj[e.v].emplace_back(e.u, k);
  }
  // F' starts as the root's component of the grown forest
  std::vector<char> kept(n, 0);
  std::vector<Vertex> stack{root};
  kept[root] = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (auto [u, k] : adj[v])
      if (!kept[u]) {
        kept[u] = 1;
        stack.push_back(u);
      }
  }
  std::vector<std::int32_t> mark(n, -1);
  std::vector<Vertex> members;
  const auto& order = growth.death_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    members.clear();
    collect_members(growth.clusters(), *it, n, members);
    for (Vertex v : members) mark[v] = *it;
    int boundary = 0;
    for (Vertex v : members) {
      if (!kept[v]) continue;
      for (auto [u, k] : adj[v])
        if (kept[u] && mark[u] != *it) ++boundary;
    }
    if (boundary == 1)
      for (Vertex v : members) kept[v] = 0;
  }

  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<char> seen(n, 0);
  stack = {root};
  seen[root] = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (auto [u, k] : adj[v])
      if (kept[u] && !seen[u]) {
        seen[u] = 1;
        parent[u] = v;
        stack.push_back(u);
      }
  }
  return prune_leaves(inst, from_parents(root, std::move(parent)));
}

SolutionTree extract_gw(const Instance& inst, const maxsum::FieldSnapshot& snap) {
  const double big = penalty_constant(inst);
  std::vector<double> prizes(inst.prizes().begin(), inst.prizes().end());
  std::vector<char> excluded(inst.num_vertices(), 0);
  for (Vertex v = 0; v < inst.num_vertices(); ++v) {
    if (v == snap.root) continue;
    const double h = snap.nodes.inclusion(v);
    if (h > 0.0) prizes[v] += big;
    if (h < 0.0) excluded[v] = 1;
  }
  std::vector<double> costs(inst.num_edges());
  for (std::int32_t k = 0; k < inst.num_edges(); ++k) {
    const auto& e = inst.edges()[k];
    costs[k] = std::min(e.weight_uv, e.weight_vu) + ((excluded[e.u] || excluded[e.v]) ? big : 0.0);
  }
  return goemans_williamson(inst, costs, prizes);
}

SolutionTree extract_gw_raw(const Instance& inst) {
  std::vector<double> costs(inst.num_edges());
  for (std::int32_t k = 0; k < inst.num_edges(); ++k)
    costs[k] = std::min(inst.edges()[k].weight_uv, inst.edges()[k].weight_vu);
  return goemans_williamson(inst, costs, inst.prizes());
}

Candidate evaluate(const Instance& inst, SolutionTree tree) {
  Candidate c;
  c.energy = energy(inst, tree);
  c.feasible = is_feasible(inst, tree);
  c.tree = std::move(tree);
  return c;
}

std::optional<Candidate> best_of(std::span<const Candidate> candidates) {
  std::optional<Candidate> best;
  for (const auto& c : candidates)
    if (c.feasible && (!best || c.energy < best->energy)) best = c;
  return best;
}

}  // namespace msteiner::heuristics
