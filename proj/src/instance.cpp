#include "msteiner/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "msteiner/errors.hpp"

namespace msteiner {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::SPG: return "SPG";
    case ProblemKind::PCSPG: return "PCSPG";
    case ProblemKind::RSTP: return "RSTP";
  }
  return "?";
}

Instance::Instance(Data data) : data_(std::move(data)) {
  const Vertex n = data_.num_vertices;
  if (n <= 0) throw StructuralError("instance needs at least one vertex");
  if (data_.prizes.empty()) data_.prizes.assign(n, 0.0);
  if (static_cast<Vertex>(data_.prizes.size()) != n)
    throw StructuralError("prize vector size does not match vertex count");
  if (!data_.terminal.empty() && static_cast<Vertex>(data_.terminal.size()) != n)
    throw StructuralError("terminal vector size does not match vertex count");
  if (data_.external_ids.empty()) {
    data_.external_ids.resize(n);
    std::iota(data_.external_ids.begin(), data_.external_ids.end(), std::int64_t{1});
  }
  if (static_cast<Vertex>(data_.external_ids.size()) != n)
    throw StructuralError("external id vector size does not match vertex count");
  if (data_.root && (*data_.root < 0 || *data_.root >= n)) throw StructuralError("root out of range");
  if (data_.kind == ProblemKind::RSTP && !data_.root) throw StructuralError("RSTP instance without root");
  if (data_.kind == ProblemKind::SPG && data_.terminal.empty())
    throw StructuralError("SPG instance without terminal flags");

  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& e : data_.edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) throw StructuralError("edge endpoint out of range");
    if (e.u == e.v) throw StructuralError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.weight_uv > 0.0) || !(e.weight_vu > 0.0) || !std::isfinite(e.weight_uv) ||
        !std::isfinite(e.weight_vu))
      throw StructuralError("edge weights must be finite and strictly positive");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw StructuralError("duplicate edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
  }

  kind_ = data_.kind;
  root_ = data_.root;
  name_ = data_.name;
  external_ids_ = data_.external_ids;
  terminal_ = data_.terminal;

  const auto m = static_cast<std::int32_t>(data_.edges.size());
  tails_.resize(2 * static_cast<std::size_t>(m));
  weights_.resize(2 * static_cast<std::size_t>(m));
  std::vector<std::int32_t> degree(n, 0);
  total_cost_ = 0.0;
  max_weight_ = 0.0;
  for (std::int32_t k = 0; k < m; ++k) {
    const auto& e = data_.edges[k];
    tails_[2 * k] = e.u;
    tails_[2 * k + 1] = e.v;
    weights_[2 * k] = e.weight_uv;
    weights_[2 * k + 1] = e.weight_vu;
    ++degree[e.u];
    ++degree[e.v];
    total_cost_ += std::max(e.weight_uv, e.weight_vu);
    max_weight_ = std::max({max_weight_, e.weight_uv, e.weight_vu});
  }

  offsets_.assign(n + 1, 0);
  for (Vertex i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::int32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (Slot s = 0; s < 2 * m; ++s) adjacency_[fill[tails_[s]]++] = s;
  for (Vertex i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
              [this](Slot a, Slot b) { return head(a) < head(b); });
  }

  prizes_.resize(n);
  for (Vertex i = 0; i < n; ++i) {
    const double c = data_.prizes[i];
    if (is_terminal(i)) continue;
    if (!(c >= 0.0) || !std::isfinite(c)) throw StructuralError("prizes must be finite and non-negative");
    prizes_[i] = c;
    total_cost_ += c;
  }
  terminal_prize_ = total_cost_ + 1.0;
  for (Vertex i = 0; i < n; ++i)
    if (is_terminal(i)) prizes_[i] = terminal_prize_;
}

std::optional<Slot> Instance::find_slot(Vertex from, Vertex to) const {
  if (from < 0 || from >= num_vertices()) return std::nullopt;
  auto slots = out_slots(from);
  auto it = std::lower_bound(slots.begin(), slots.end(), to,
                             [this](Slot s, Vertex v) { return head(s) < v; });
  if (it == slots.end() || head(*it) != to) return std::nullopt;
  return *it;
}

std::vector<Vertex> Instance::profitable(std::optional<Vertex> excluding) const {
  std::vector<Vertex> out;
  for (Vertex i = 0; i < num_vertices(); ++i)
    if (prizes_[i] > 0.0 && (!excluding || *excluding != i)) out.push_back(i);
  return out;
}

std::vector<Vertex> Instance::terminals() const {
  std::vector<Vertex> out;
  for (Vertex i = 0; i < num_vertices(); ++i)
    if (is_terminal(i)) out.push_back(i);
  return out;
}

Vertex Instance::require_root() const {
  if (!root_) throw ConfigError("instance has no root");
  return *root_;
}

Instance Instance::with_root(Vertex r) const {
  if (r < 0 || r >= num_vertices()) throw StructuralError("root out of range");
  Data d = data_;
  d.root = r;
  return Instance(std::move(d));
}

}  // namespace msteiner
