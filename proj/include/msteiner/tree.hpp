#pragma once

#include <cstdint>
#include <vector>

#include "msteiner/instance.hpp"

namespace msteiner {

/// Rooted tree over an instance. parent[i] is i's neighbour toward the root,
/// kNoVertex for the root itself and for non-members.
struct SolutionTree {
  Vertex root = kNoVertex;
  std::vector<Vertex> parent;
  std::vector<char> member;

  static SolutionTree singleton(Vertex root, Vertex num_vertices);

  bool contains(Vertex v) const noexcept { return member[v] != 0; }
  std::int32_t size() const noexcept;
  /// (child, parent) pairs sorted by child.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  friend bool operator==(const SolutionTree&, const SolutionTree&) = default;
};

/// Throws StructuralError unless the tree is acyclic, rooted and uses instance edges only.
void check_tree(const Instance& inst, const SolutionTree& tree);

/// Sum of member edge weights (oriented toward the root) plus prizes of excluded vertices.
double energy(const Instance& inst, const SolutionTree& tree);

/// Every SPG terminal is a member. Always true for prize-collecting kinds.
bool is_feasible(const Instance& inst, const SolutionTree& tree);

/// Longest root-to-member hop distance.
std::int32_t height(const SolutionTree& tree);

enum class Model { Normal, Flat };

/// Antisymmetric depth vector over oriented edge slots.
struct Representation {
  std::int32_t bound = 0;
  std::vector<std::int32_t> depth;  // indexed by Slot

  friend bool operator==(const Representation&, const Representation&) = default;
};

Representation tree_to_representation(const Instance& inst, const SolutionTree& tree, Model model,
                                      std::int32_t bound);

/// Checks the local compatibility constraint of every vertex (and antisymmetry, bound).
bool validate_representation(const Instance& inst, const Representation& rep, Model model);

struct Subgraph {
  SolutionTree tree;
  /// Oriented slots (i -> j, d_ij > 0) belonging to constant-depth cycles detached from the root.
  std::vector<Slot> extra_cycles;
};

Subgraph representation_to_subgraph(const Instance& inst, const Representation& rep);

/// Energy of a depth vector: +inf when any local constraint fails under the model.
/// Unlike energy(tree), detached flat cycles pay for their edges.
double representation_energy(const Instance& inst, const Representation& rep, Model model);

/// Percentage gap (x - y) / y * 100. Throws DomainError when y == 0.
double gap(double x, double y);

}  // namespace msteiner
