#pragma once

#include <span>
#include <utility>
#include <vector>

#include "msteiner/engine.hpp"
#include "msteiner/instance.hpp"
#include "msteiner/tree.hpp"

// Ground truth for small instances. Deliberately uses different algorithms
// from the production code paths so a shared bug cannot confirm itself.
namespace msteiner::oracle {

struct Optimum {
  SolutionTree tree;
  double cost = 0.0;
};

/// Exact minimum of the tree energy by enumeration. Needs a root and either
/// |V| <= 14 with symmetric weights or |E| <= 20; otherwise throws BudgetError.
Optimum brute_force_optimum(const Instance& inst);

struct Forest {
  double cost = 0.0;
  std::vector<std::pair<Vertex, Vertex>> edges;  // (min, max) endpoint pairs
};

/// Kruskal minimum spanning forest. slot_weights overrides the instance weights
/// (an undirected edge costs the smaller of its two orientations).
Forest reference_mst(const Instance& inst, std::span<const double> slot_weights = {});

/// Bellman-Ford: cost of the cheapest path from each vertex to `target`, each
/// step i -> j paying slot (i -> j). Unreachable vertices get +inf.
std::vector<double> reference_sssp(const Instance& inst, Vertex target,
                                   std::span<const double> slot_weights = {});

/// Direct maximization over all neighbour depth tuples; rows normalized like
/// update_vertex. Degree <= 4 and depth <= 3, otherwise BudgetError.
std::vector<double> exhaustive_update(const maxsum::VertexProblem& problem);

/// Same, with the vertex problem read off an engine state.
std::vector<double> exhaustive_update(const Instance& inst, const maxsum::EngineState& state, Vertex vertex);

/// The vertex problem update_vertex would see for `vertex` in the current state.
maxsum::VertexProblem vertex_problem(const Instance& inst, const maxsum::EngineState& state, Vertex vertex,
                                     std::vector<double>& weights_buf, std::vector<double>& inputs_buf);

}  // namespace msteiner::oracle
