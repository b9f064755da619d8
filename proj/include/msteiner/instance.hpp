#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace msteiner {

using Vertex = std::int32_t;
/// Oriented edge slot. Undirected edge k owns slots 2k (u->v) and 2k+1 (v->u).
using Slot = std::int32_t;

inline constexpr Vertex kNoVertex = -1;
inline constexpr Slot kNoSlot = -1;

enum class ProblemKind { SPG, PCSPG, RSTP };

std::string to_string(ProblemKind kind);

/// One undirected edge with a weight per orientation.
struct EdgeSpec {
  Vertex u = 0;
  Vertex v = 0;
  double weight_uv = 1.0;  // cost of the orientation u -> v (u's parent is v)
  double weight_vu = 1.0;
};

/// Immutable rooted Steiner instance: positive oriented weights, non-negative
/// prizes, optional root. SPG terminals carry a finite prize sentinel that
/// exceeds the cost of any tree, so excluding one is never optimal.
class Instance {
 public:
  struct Data {
    Vertex num_vertices = 0;
    std::vector<EdgeSpec> edges;
    std::vector<double> prizes;      // ignored for terminals of an SPG
    std::vector<char> terminal;      // SPG terminals; may be empty
    std::optional<Vertex> root;
    ProblemKind kind = ProblemKind::PCSPG;
    std::vector<std::int64_t> external_ids;  // defaults to 1..n
    std::string name;
  };

  Instance() = default;
  /// Validates and freezes the data. Throws StructuralError on invariant violations.
  explicit Instance(Data data);

  Vertex num_vertices() const noexcept { return static_cast<Vertex>(prizes_.size()); }
  std::int32_t num_edges() const noexcept { return static_cast<std::int32_t>(data_.edges.size()); }
  std::int32_t num_slots() const noexcept { return 2 * num_edges(); }

  std::span<const Slot> out_slots(Vertex i) const noexcept {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::int32_t degree(Vertex i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  Vertex tail(Slot s) const noexcept { return tails_[s]; }
  Vertex head(Slot s) const noexcept { return tails_[s ^ 1]; }
  static constexpr Slot reverse(Slot s) noexcept { return s ^ 1; }
  double weight(Slot s) const noexcept { return weights_[s]; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::optional<Slot> find_slot(Vertex from, Vertex to) const;

  double prize(Vertex i) const noexcept { return prizes_[i]; }
  std::span<const double> prizes() const noexcept { return prizes_; }
  bool is_terminal(Vertex i) const noexcept { return !terminal_.empty() && terminal_[i] != 0; }
  /// Profitable vertices other than the root: c_v > 0.
  std::vector<Vertex> profitable(std::optional<Vertex> excluding = std::nullopt) const;
  std::vector<Vertex> terminals() const;

  ProblemKind kind() const noexcept { return kind_; }
  std::optional<Vertex> root() const noexcept { return root_; }
  /// Root, throwing ConfigError when unset.
  Vertex require_root() const;
  Instance with_root(Vertex r) const;

  std::int64_t external_id(Vertex i) const noexcept { return external_ids_[i]; }
  const std::string& name() const noexcept { return name_; }

  /// Prize carried by SPG terminals: sum of weights + finite prizes + 1.
  double terminal_prize() const noexcept { return terminal_prize_; }
  /// Total of undirected edge weights (the larger orientation) and finite prizes.
  double total_cost() const noexcept { return total_cost_; }
  double max_weight() const noexcept { return max_weight_; }

  const std::vector<EdgeSpec>& edges() const noexcept { return data_.edges; }
  const Data& data() const noexcept { return data_; }

 private:
  Data data_;
  std::vector<std::int32_t> offsets_;
  std::vector<Slot> adjacency_;
  std::vector<Vertex> tails_;
  std::vector<double> weights_;
  std::vector<double> prizes_;
  std::vector<char> terminal_;
  std::vector<std::int64_t> external_ids_;
  std::optional<Vertex> root_;
  ProblemKind kind_ = ProblemKind::PCSPG;
  std::string name_;
  double terminal_prize_ = 0.0;
  double total_cost_ = 0.0;
  double max_weight_ = 0.0;
};

}  // namespace msteiner
