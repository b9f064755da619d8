#include "msteiner/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "msteiner/errors.hpp"

namespace msteiner {

SolutionTree SolutionTree::singleton(Vertex root, Vertex num_vertices) {
  SolutionTree t;
  t.root = root;
  t.parent.assign(num_vertices, kNoVertex);
  t.member.assign(num_vertices, 0);
  t.member[root] = 1;
  return t;
}

std::int32_t SolutionTree::size() const noexcept {
  return static_cast<std::int32_t>(std::count(member.begin(), member.end(), char{1}));
}

std::vector<std::pair<Vertex, Vertex>> SolutionTree::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex i = 0; i < static_cast<Vertex>(parent.size()); ++i)
    if (member[i] && parent[i] != kNoVertex) out.emplace_back(i, parent[i]);
  return out;
}

void check_tree(const Instance& inst, const SolutionTree& tree) {
  const Vertex n = inst.num_vertices();
  if (static_cast<Vertex>(tree.parent.size()) != n || static_cast<Vertex>(tree.member.size()) != n)
    throw StructuralError("tree size does not match instance");
  if (tree.root < 0 || tree.root >= n || !tree.member[tree.root])
    throw StructuralError("tree root is not a member");
  if (tree.parent[tree.root] != kNoVertex) throw StructuralError("tree root has a parent");
  for (Vertex i = 0; i < n; ++i) {
    const Vertex p = tree.parent[i];
    if (!tree.member[i]) {
      if (p != kNoVertex) throw StructuralError("non-member vertex has a parent");
      continue;
    }
    if (i == tree.root) continue;
    if (p < 0 || p >= n || !tree.member[p]) throw StructuralError("member parent is not a member");
    if (!inst.find_slot(i, p)) throw StructuralError("tree uses an edge missing from the instance");
  }
  // 0 = unvisited, 1 = on current path, 2 = reaches root
  std::vector<char> state(n, 0);
  state[tree.root] = 2;
  std::vector<Vertex> path;
  for (Vertex i = 0; i < n; ++i) {
    if (!tree.member[i] || state[i] == 2) continue;
    path.clear();
    Vertex v = i;
    while (state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = tree.parent[v];
    }
    if (state[v] == 1) throw StructuralError("tree parent pointers contain a cycle");
    for (Vertex u : path) state[u] = 2;
  }
}

double energy(const Instance& inst, const SolutionTree& tree) {
  check_tree(inst, tree);
  double cost = 0.0;
  for (Vertex i = 0; i < inst.num_vertices(); ++i) {
    if (!tree.member[i]) {
      cost += inst.prize(i);
    } else if (i != tree.root) {
      cost += inst.weight(*inst.find_slot(i, tree.parent[i]));
    }
  }
  return cost;
}

bool is_feasible(const Instance& inst, const SolutionTree& tree) {
  if (inst.kind() != ProblemKind::SPG) return true;
  for (Vertex i = 0; i < inst.num_vertices(); ++i)
    if (inst.is_terminal(i) && !tree.member[i]) return false;
  return true;
}

namespace {

// Members in breadth-first order from the root, with hop depths.
std::vector<Vertex> bfs_order(const SolutionTree& tree, std::vector<std::int32_t>& hops) {
  const auto n = static_cast<Vertex>(tree.parent.size());
  std::vector<std::vector<Vertex>> children(n);
  for (Vertex i = 0; i < n; ++i)
    if (tree.member[i] && tree.parent[i] != kNoVertex) children[tree.parent[i]].push_back(i);
  hops.assign(n, -1);
  std::vector<Vertex> order{tree.root};
  hops[tree.root] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (Vertex c : children[order[k]]) {
      hops[c] = hops[order[k]] + 1;
      order.push_back(c);
    }
  }
  return order;
}

}  // namespace

std::int32_t height(const SolutionTree& tree) {
  std::vector<std::int32_t> hops;
  bfs_order(tree, hops);
  return *std::max_element(hops.begin(), hops.end());
}

Representation tree_to_representation(const Instance& inst, const SolutionTree& tree, Model model,
                                      std::int32_t bound) {
  check_tree(inst, tree);
  const Vertex n = inst.num_vertices();
  std::vector<std::int32_t> hops;
  const auto order = bfs_order(tree, hops);

  std::vector<std::int32_t> label(n, 0);
  if (model == Model::Normal) {
    label = hops;
  } else {
    std::vector<std::int32_t> children(n, 0);
    for (Vertex i : order)
      if (i != tree.root) ++children[tree.parent[i]];
    // depth only grows below terminals, branching vertices and the root
    for (Vertex i : order) {
      if (i == tree.root) continue;
      const Vertex p = tree.parent[i];
      const bool keep = p != tree.root && inst.prize(p) == 0.0 && children[p] == 1;
      label[i] = keep ? label[p] : label[p] + 1;
    }
  }

  Representation rep;
  rep.bound = bound;
  rep.depth.assign(inst.num_slots(), 0);
  for (Vertex i : order) {
    if (i == tree.root) continue;
    if (label[i] > bound)
      throw BoundError("tree needs depth " + std::to_string(label[i]) + " > bound " +
                       std::to_string(bound));
    const Slot s = *inst.find_slot(i, tree.parent[i]);
    rep.depth[s] = label[i];
    rep.depth[Instance::reverse(s)] = -label[i];
  }
  return rep;
}

namespace {

bool vertex_ok(const Instance& inst, const Representation& rep, Vertex i, Vertex root, Model model) {
  const auto slots = inst.out_slots(i);
  // rep.depth[s] is d_ik for s = (i -> k); the incoming value d_ki is its negation.
  if (i == root) {
    return std::all_of(slots.begin(), slots.end(), [&](Slot s) {
      const auto d_ki = -rep.depth[s];
      return d_ki == 0 || d_ki == 1;
    });
  }
  Slot parent = kNoSlot;
  for (Slot s : slots) {
    if (rep.depth[s] > 0) {
      if (parent != kNoSlot) return false;
      parent = s;
    }
  }
  if (parent == kNoSlot) {
    return std::all_of(slots.begin(), slots.end(), [&](Slot s) { return rep.depth[s] == 0; });
  }
  const auto d = rep.depth[parent];
  bool normal = true;
  std::int32_t flat_children = 0;
  bool flat = model == Model::Flat && inst.prize(i) == 0.0;
  for (Slot s : slots) {
    if (s == parent) continue;
    const auto d_li = -rep.depth[s];
    if (d_li != 0 && d_li != d + 1) normal = false;
    if (d_li == d) {
      ++flat_children;
    } else if (d_li != 0) {
      flat = false;
    }
  }
  return normal || (flat && flat_children == 1);
}

}  // namespace

bool validate_representation(const Instance& inst, const Representation& rep, Model model) {
  if (static_cast<std::int32_t>(rep.depth.size()) != inst.num_slots()) return false;
  const Vertex root = inst.require_root();
  for (Slot s = 0; s < inst.num_slots(); ++s) {
    if (std::abs(rep.depth[s]) > rep.bound) return false;
    if (rep.depth[s] != -rep.depth[Instance::reverse(s)]) return false;
  }
  for (Vertex i = 0; i < inst.num_vertices(); ++i)
    if (!vertex_ok(inst, rep, i, root, model)) return false;
  return true;
}

Subgraph representation_to_subgraph(const Instance& inst, const Representation& rep) {
  if (!validate_representation(inst, rep, Model::Normal) &&
      !validate_representation(inst, rep, Model::Flat))
    throw StructuralError("representation violates the compatibility constraints");
  const Vertex n = inst.num_vertices();
  const Vertex root = inst.require_root();
  std::vector<Slot> up(n, kNoSlot);
  std::vector<std::vector<Vertex>> children(n);
  for (Slot s = 0; s < inst.num_slots(); ++s) {
    if (rep.depth[s] > 0) {
      up[inst.tail(s)] = s;
      children[inst.head(s)].push_back(inst.tail(s));
    }
  }
  Subgraph out;
  out.tree = SolutionTree::singleton(root, n);
  std::vector<Vertex> queue{root};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (Vertex c : children[queue[k]]) {
      out.tree.member[c] = 1;
      out.tree.parent[c] = queue[k];
      queue.push_back(c);
    }
  }
  for (Vertex i = 0; i < n; ++i)
    if (!out.tree.member[i] && up[i] != kNoSlot) out.extra_cycles.push_back(up[i]);
  return out;
}

double representation_energy(const Instance& inst, const Representation& rep, Model model) {
  if (!validate_representation(inst, rep, model)) return std::numeric_limits<double>::infinity();
  const Vertex root = inst.require_root();
  double cost = 0.0;
  for (Vertex i = 0; i < inst.num_vertices(); ++i) {
    bool empty = true;
    for (Slot s : inst.out_slots(i)) {
      if (rep.depth[s] > 0) cost += inst.weight(s);
      if (rep.depth[s] != 0) empty = false;
    }
    if (empty && i != root) cost += inst.prize(i);
  }
  return cost;
}

double gap(double x, double y) {
  if (y == 0.0) throw DomainError("gap: reference value is zero");
  return (x - y) / y * 100.0;
}

}  // namespace msteiner
