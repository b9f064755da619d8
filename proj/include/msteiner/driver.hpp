#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msteiner/engine.hpp"
#include "msteiner/heuristics.hpp"
#include "msteiner/instance.hpp"
#include "msteiner/tree.hpp"

namespace msteiner::driver {

enum class Scheme { Increasing, Bounded };

enum class Extraction {
  MstEdges,  // "O": Prim over edge-reweighted costs
  MstNodes,  // "N": Prim over node-reweighted costs
  SptEdges,  // "J": Dijkstra over edge-reweighted costs
  Gw,        // "W": Goemans-Williamson over MS-modified prizes and weights
};

struct Variant {
  Model model = Model::Normal;
  Extraction extraction = Extraction::MstEdges;
  std::string label;
};

/// Comma-separated labels: O, N, J, W, F, FN, FJ, FW (letters in either order).
/// W requires a prize-collecting instance. Throws ConfigError.
std::vector<Variant> parse_variants(std::string_view text, ProblemKind kind);

struct SolverConfig {
  std::string variant = "O";
  Scheme scheme = Scheme::Increasing;
  std::optional<std::int32_t> depth;  // replaces D_min as the starting depth
  double gamma1_start = 1e-2;
  double gamma1_min = 1e-5;
  /// Run one unreinforced leg (gamma1 = 0) of at most this many sweeps before the schedule.
  std::int64_t plain_iterations = 0;
  double time_limit = 10.0;  // seconds, wall clock
  std::uint64_t seed = 1;
  std::int32_t window = maxsum::StabilityMonitor::kDefaultWindow;
  std::optional<double> mu;           // virtual-root edge weight for PCSPG rooting
  std::optional<Vertex> root;         // skips rooting
  std::int64_t max_iterations = 1'000'000;  // per gamma1 leg
  double max_gamma = 3.0;             // a leg stops once gamma1 * t exceeds this (plus the window)
  double leg_tolerance = 1e-6;
  maxsum::Schedule schedule = maxsum::Schedule::Sequential;
};

/// Throws ConfigError on invalid combinations.
void validate(const SolverConfig& config);

struct TraceRecord {
  double time_s = 0.0;
  std::int64_t iter = 0;
  std::string label;
  double energy = 0.0;
  bool feasible = false;
  std::int32_t depth = 0;
  double gamma1 = 0.0;
};

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

struct RunResult {
  SolutionTree best;
  double energy = 0.0;
  bool feasible = false;
  Vertex root = kNoVertex;
  std::vector<TraceRecord> trace;
  std::int64_t iterations = 0;          // sweeps over all legs
  bool converged = false;               // some leg's stability monitor fired
  std::optional<double> decisional_energy;  // tree energy of d* at the last convergence
  std::optional<double> extracted_at_convergence;  // best extraction of that same iteration
  std::vector<std::int32_t> depths;     // depth used by each D leg, in order
  std::vector<double> gammas;           // gamma1 of each reinforced leg, in order
};

/// Terminal with the smallest hop eccentricity to the other terminals (lowest id on ties).
Vertex root_spg(const Instance& inst);

/// Virtual-root pre-pass: argmax over profitable j of H_{j r}(1) after a short MS run
/// on the instance augmented with weight-mu edges to every profitable vertex.
Vertex root_pcspg(const Instance& inst, double mu, double time_budget_s, std::uint64_t seed = 1);

/// Normal: largest hop distance from the root to a profitable vertex (at least 1).
/// Flat: number of profitable vertices other than the root. Throws InfeasibleError
/// when an SPG terminal is unreachable.
std::int32_t compute_dmin(const Instance& inst, Vertex root, Model model);

RunResult run(const Instance& inst, const SolverConfig& config);

struct GapReport {
  bool feasible_x = false;
  bool feasible_y = false;
  std::optional<double> final_x, final_y;
  std::optional<double> gap;  // gap(final_x, final_y)
  std::optional<double> first_feasible_x, first_feasible_y;  // seconds
};

GapReport compare(const std::vector<TraceRecord>& x, const std::vector<TraceRecord>& y);

}  // namespace msteiner::driver
