#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msteiner/instance.hpp"
#include "msteiner/tree.hpp"

namespace msteiner::maxsum {

/// Row-major table of extended reals: one row of 2D+1 entries (depths -D..D) per slot.
class FieldTable {
 public:
  FieldTable() = default;
  FieldTable(std::int32_t rows, std::int32_t depth, double fill = 0.0)
      : rows_(rows), depth_(depth), values_(static_cast<std::size_t>(rows) * (2 * depth + 1), fill) {}

  std::int32_t rows() const noexcept { return rows_; }
  std::int32_t depth() const noexcept { return depth_; }
  std::int32_t width() const noexcept { return 2 * depth_ + 1; }

  std::span<double> row(std::int32_t r) noexcept {
    return {values_.data() + static_cast<std::size_t>(r) * width(), static_cast<std::size_t>(width())};
  }
  std::span<const double> row(std::int32_t r) const noexcept {
    return {values_.data() + static_cast<std::size_t>(r) * width(), static_cast<std::size_t>(width())};
  }
  double at(std::int32_t r, std::int32_t d) const noexcept {
    return values_[static_cast<std::size_t>(r) * width() + d + depth_];
  }
  double& at(std::int32_t r, std::int32_t d) noexcept {
    return values_[static_cast<std::size_t>(r) * width() + d + depth_];
  }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const FieldTable&, const FieldTable&) = default;

 private:
  std::int32_t rows_ = 0;
  std::int32_t depth_ = 0;
  std::vector<double> values_;
};

/// Shifts a row so its maximum is 0; sentinel entries stay at the sentinel.
void normalize(std::span<double> row);

enum class Schedule { Sequential, Synchronous };

struct EngineOptions {
  std::int32_t depth = 1;
  Model model = Model::Normal;
  double gamma1 = 0.0;
  std::uint64_t seed = 1;
  Schedule schedule = Schedule::Sequential;
  /// Noise amplitude relative to the largest weight.
  double noise_scale = 1e-9;
};

struct EngineState {
  EngineOptions options;
  Vertex root = kNoVertex;
  std::vector<double> noise;    // per undirected edge, added to both orientations
  std::vector<double> weights;  // noised oriented weights
  FieldTable messages;          // h_ij, row = slot (i -> j)
  FieldTable feedback;          // gamma_t * H^t_ij, added to h_ij wherever it is read as input
  FieldTable local;             // H_ij
  std::int64_t iteration = 0;
  std::uint64_t updates = 0;    // message entries written, for cost accounting

  double gamma() const noexcept { return options.gamma1 * static_cast<double>(iteration); }
};

EngineState init_state(const Instance& inst, const EngineOptions& options);

/// One vertex's outgoing-message problem. inputs holds one row per neighbour a
/// (in out_slots order) with q_{k_a i}(d) = h_{k_a i}(d) + feedback.
struct VertexProblem {
  std::int32_t depth = 1;
  Model model = Model::Normal;
  bool is_root = false;
  double prize = 0.0;
  std::span<const double> weights;  // w_{i k_a}
  std::span<const double> inputs;   // degree * (2D+1)
};

/// Writes normalized h_{i k_a} for every neighbour into out (degree rows).
/// Costs Theta(D * degree).
void update_vertex(const VertexProblem& problem, std::span<double> out);

/// Recomputes every message once under the normal model.
void ms_sweep_normal(EngineState& state, const Instance& inst);
/// Recomputes every message once under the flat model.
void ms_sweep_flat(EngineState& state, const Instance& inst);
/// Dispatches on state.options.model.
void sweep(EngineState& state, const Instance& inst);

/// H^{t+1} = h_ij(d) + h_ji(-d) + gamma_t H^t, renormalized; advances t and the feedback term.
void reinforce(EngineState& state);

/// Per-slot argmax of the local field; ties prefer 0, then smaller |d|, then negative d.
Representation decisional_variables(const FieldTable& local);
inline Representation decisional_variables(const EngineState& state) {
  return decisional_variables(state.local);
}

/// Vertex max-marginals h_i(d), d = 0..D.
struct NodeFields {
  std::int32_t depth = 0;
  Vertex root = kNoVertex;
  std::vector<double> values;  // num_vertices * (D+1)

  double at(Vertex i, std::int32_t d) const noexcept {
    return values[static_cast<std::size_t>(i) * (depth + 1) + d];
  }
  /// max_{d>0} h_i(d) - h_i(0); the root counts as included.
  double inclusion(Vertex i) const noexcept;
  bool included(Vertex i) const noexcept { return i == root || inclusion(i) > 0.0; }
};

NodeFields node_fields(const EngineState& state, const Instance& inst);

/// Read-only copy taken between sweeps and handed to the extraction heuristics.
struct FieldSnapshot {
  Model model = Model::Normal;
  Vertex root = kNoVertex;
  std::int64_t iteration = 0;
  FieldTable local;
  NodeFields nodes;
};

FieldSnapshot snapshot(const EngineState& state, const Instance& inst, bool with_node_fields = true);

/// Fires once the decisional variables have been identical for `window` consecutive pushes.
class StabilityMonitor {
 public:
  static constexpr std::int32_t kDefaultWindow = 50;

  explicit StabilityMonitor(std::int32_t window = kDefaultWindow) : window_(window) {}

  bool push(const Representation& rep);
  bool converged() const noexcept { return run_ >= window_; }
  std::int32_t run_length() const noexcept { return run_; }
  std::int32_t window() const noexcept { return window_; }
  void reset() noexcept {
    run_ = 0;
    last_.depth.clear();
  }

 private:
  std::int32_t window_;
  std::int32_t run_ = 0;
  Representation last_;
};

}  // namespace msteiner::maxsum
