#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msteiner/engine.hpp"
#include "msteiner/instance.hpp"
#include "msteiner/tree.hpp"

namespace msteiner::heuristics {

/// Auxiliary non-negative costs per oriented slot, used to build a spanning tree.
struct ReweightedView {
  std::vector<double> weights;  // indexed by Slot
  std::vector<char> forced;     // empty unless built by reweight_nodes
  double penalty = 0.0;
};

/// C = sum of weights + sum of finite prizes + 1.
double penalty_constant(const Instance& inst);

/// The instance's own weights.
ReweightedView raw_view(const Instance& inst);

/// cost_ij = -max_{d != 0} H_ij(d): zero when the decisional variable is non-zero.
ReweightedView reweight_edges(const Instance& inst, const maxsum::FieldSnapshot& snap);

/// Original weights inside the predicted vertex set, + C on edges leaving it.
ReweightedView reweight_nodes(const Instance& inst, const maxsum::FieldSnapshot& snap);

/// Prim tree from the root under slot costs: a vertex v joins through the cheapest
/// slot (v -> u) toward a vertex u already in the tree. Spans the root's component.
SolutionTree prim_tree(const Instance& inst, Vertex root, std::span<const double> slot_costs);

/// Dijkstra shortest-path tree toward the root: v's parent minimizes cost(v -> u) + dist(u).
SolutionTree dijkstra_tree(const Instance& inst, Vertex root, std::span<const double> slot_costs);

/// Repeatedly removes non-root leaves whose original parent edge costs more than their prize.
SolutionTree prune_leaves(const Instance& inst, SolutionTree tree);

SolutionTree extract_mst(const Instance& inst, const ReweightedView& view);
SolutionTree extract_spt(const Instance& inst, const ReweightedView& view);

/// Rooted Goemans-Williamson growth and pruning on undirected edge costs
/// (one per edge) and vertex prizes, followed by leaf pruning on the original
/// instance. The root's cluster never grows.
SolutionTree goemans_williamson(const Instance& inst, std::span<const double> edge_costs,
                                std::span<const double> prizes);

/// GW on prizes and weights raised by C according to the snapshot's vertex predictions.
SolutionTree extract_gw(const Instance& inst, const maxsum::FieldSnapshot& snap);

/// Unmodified GW: edge cost = cheaper orientation, original prizes.
SolutionTree extract_gw_raw(const Instance& inst);

struct Candidate {
  SolutionTree tree;
  double energy = 0.0;
  bool feasible = false;
};

Candidate evaluate(const Instance& inst, SolutionTree tree);

/// Minimum-energy feasible candidate; nullopt when none is feasible.
std::optional<Candidate> best_of(std::span<const Candidate> candidates);

}  // namespace msteiner::heuristics
