#include "msteiner/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <sstream>

#include "msteiner/errors.hpp"
#include "msteiner/stp.hpp"

namespace msteiner::driver {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::int32_t> bfs_hops(const Instance& inst, Vertex source) {
  std::vector<std::int32_t> hops(inst.num_vertices(), -1);
  std::deque<Vertex> queue{source};
  hops[source] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (Slot s : inst.out_slots(v)) {
      const Vertex u = inst.head(s);
      if (hops[u] < 0) {
        hops[u] = hops[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return hops;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<Variant> parse_variants(std::string_view text, ProblemKind kind) {
  std::vector<Variant> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = trim(text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos));
    pos = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (token.empty()) throw ConfigError("empty variant label in '" + std::string(text) + "'");
    std::string letters;
    for (char c : token) letters.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    const bool flat = letters.find('F') != std::string::npos;
    std::string rest;
    for (char c : letters)
      if (c != 'F') rest.push_back(c);
    if (letters.size() > 2 || (letters.size() == 2 && !flat))
      throw ConfigError("unknown variant combination '" + token + "'");
    Variant v;
    v.model = flat ? Model::Flat : Model::Normal;
    if (rest.empty() || rest == "O") {
      if (flat && rest == "O") throw ConfigError("unknown variant combination '" + token + "'");
      v.extraction = Extraction::MstEdges;
    } else if (rest == "N") {
      v.extraction = Extraction::MstNodes;
    } else if (rest == "J") {
      v.extraction = Extraction::SptEdges;
    } else if (rest == "W") {
      if (kind == ProblemKind::SPG) throw ConfigError("variant W needs a prize-collecting instance");
      v.extraction = Extraction::Gw;
    } else {
      throw ConfigError("unknown variant label '" + token + "'");
    }
    v.label = flat ? "F" + rest : rest;
    if (std::none_of(out.begin(), out.end(), [&](const Variant& x) { return x.label == v.label; })) out.push_back(v);
  }
  return out;
}

void validate(const SolverConfig& c) {
  if (!(c.gamma1_min > 0.0) || !(c.gamma1_start >= c.gamma1_min))
    throw ConfigError("gamma1 schedule needs gamma1_start >= gamma1_min > 0");
  if (!(c.time_limit > 0.0)) throw ConfigError("time limit must be positive");
  if (c.window < 1) throw ConfigError("stability window must be positive");
  if (c.depth && *c.depth < 1) throw ConfigError("depth must be at least 1");
  if (c.mu && !(*c.mu > 0.0)) throw ConfigError("mu must be positive");
  if (c.max_iterations < 1) throw ConfigError("max_iterations must be positive");
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "time_s,iter,label,energy,feasible,D,gamma1\n";
  for (const auto& r : trace)
    out << format_fixed6(r.time_s) << ',' << r.iter << ',' << r.label << ',' << format_fixed6(r.energy) << ','
        << (r.feasible ? 1 : 0) << ',' << r.depth << ',' << format_real(r.gamma1) << '\n';
}

Vertex root_spg(const Instance& inst) {
  const auto terms = inst.terminals();
  if (terms.empty()) throw ConfigError("SPG rooting needs at least one terminal");
  Vertex best = terms.front();
  std::int64_t best_ecc = std::numeric_limits<std::int64_t>::max();
  for (Vertex t : terms) {
    const auto hops = bfs_hops(inst, t);
    std::int64_t ecc = 0;
    for (Vertex u : terms) ecc = std::max<std::int64_t>(ecc, hops[u] < 0 ? inst.num_vertices() : hops[u]);
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = t;
    }
  }
  return best;
}

Vertex root_pcspg(const Instance& inst, double mu, double time_budget_s, std::uint64_t seed) {
  const auto prof = inst.profitable();
  if (prof.empty()) throw ConfigError("PCSPG rooting needs a profitable vertex");
  if (prof.size() == 1) return prof.front();
  const auto t0 = Clock::now();

  Instance::Data aug = inst.data();
  const Vertex r = inst.num_vertices();
  aug.num_vertices = r + 1;
  aug.prizes.assign(inst.prizes().begin(), inst.prizes().end());
  aug.prizes.push_back(0.0);
  aug.terminal.clear();
  aug.external_ids.clear();
  for (Vertex j : prof) aug.edges.push_back({j, r, mu, mu});
  aug.root = r;
  aug.kind = ProblemKind::RSTP;
  const Instance augmented(std::move(aug));

  // depth estimate: hop eccentricity of the richest profitable vertex, plus the virtual edge
  Vertex center = prof.front();
  for (Vertex j : prof)
    if (inst.prize(j) > inst.prize(center)) center = j;
  const auto hops = bfs_hops(inst, center);
  std::int32_t ecc = 0;
  for (Vertex j : prof) ecc = std::max(ecc, hops[j]);
  maxsum::EngineOptions o;
  o.depth = std::max<std::int32_t>(2, std::min<std::int32_t>(ecc + 1, r));
  o.gamma1 = 1e-2;
  o.seed = seed;
  auto state = maxsum::init_state(augmented, o);
  maxsum::StabilityMonitor monitor;
  const std::int64_t cap = static_cast<std::int64_t>(std::ceil(3.0 / o.gamma1)) + monitor.window();
  for (std::int64_t it = 0; it < cap; ++it) {
    maxsum::sweep(state, augmented);
    maxsum::reinforce(state);
    if (monitor.push(maxsum::decisional_variables(state))) break;
    if (seconds_since(t0) > time_budget_s) break;
  }
  Vertex best = prof.front();
  double best_h = -kInf;
  for (Vertex j : prof) {
    const double h = state.local.at(*augmented.find_slot(j, r), 1);
    if (h > best_h) {
      best_h = h;
      best = j;
    }
  }
  return best;
}

std::int32_t compute_dmin(const Instance& inst, Vertex root, Model model) {
  const auto hops = bfs_hops(inst, root);
  std::int32_t profitable = 0;
  std::int32_t far = 1;
  for (Vertex v = 0; v < inst.num_vertices(); ++v) {
    if (v == root || !(inst.prize(v) > 0.0)) continue;
    if (hops[v] < 0) {
      if (inst.is_terminal(v)) throw InfeasibleError("terminal " + std::to_string(inst.external_id(v)) + " unreachable from the root");
      continue;
    }
    ++profitable;
    far = std::max(far, hops[v]);
  }
  if (model == Model::Flat) return std::max(1, profitable);
  return far;
}

namespace {

class Campaign {
 public:
  Campaign(const Instance& inst, const SolverConfig& config, RunResult& result, Clock::time_point t0)
      : inst_(inst), config_(config), result_(result), t0_(t0) {}

  void run(Model model, const std::vector<Variant>& variants, Clock::time_point deadline) {
    deadline_ = deadline;
    const Vertex n = inst_.num_vertices();
    const std::int32_t cap = std::max<std::int32_t>(1, n - 1);
    std::int32_t depth = config_.depth ? *config_.depth : compute_dmin(inst_, result_.root, model);
    while (true) {
      result_.depths.push_back(depth);
      if (config_.plain_iterations > 0) leg(model, variants, depth, 0.0, config_.plain_iterations);
      double previous = kInf;
      for (double g = config_.gamma1_start; g >= config_.gamma1_min * (1 - 1e-12) && !expired(); g /= 2) {
        result_.gammas.push_back(g);
        const auto legs_cap = static_cast<std::int64_t>(std::ceil(config_.max_gamma / g)) + config_.window;
        const double found = leg(model, variants, depth, g, std::min(config_.max_iterations, legs_cap));
        if (std::isfinite(previous) && std::isfinite(found) && previous - found < config_.leg_tolerance * std::abs(found))
          break;
        previous = std::min(previous, found);
      }
      if (config_.scheme == Scheme::Bounded || expired() || depth >= cap) break;
      depth = std::min(cap, depth + (depth + 3) / 4);
    }
  }

 private:
  bool expired() const { return Clock::now() >= deadline_; }

  void record(const std::string& label, const heuristics::Candidate& c, std::int32_t depth, double gamma) {
    result_.trace.push_back({seconds_since(t0_), result_.iterations, label, c.energy, c.feasible, depth, gamma});
    if (c.feasible && (!result_.feasible || c.energy < result_.energy)) {
      result_.feasible = true;
      result_.energy = c.energy;
      result_.best = c.tree;
    }
  }

  // One reinforced MS run at fixed D and gamma1; returns the best feasible energy it produced.
  double leg(Model model, const std::vector<Variant>& variants, std::int32_t depth, double gamma, std::int64_t cap) {
    maxsum::EngineOptions o;
    o.depth = depth;
    o.model = model;
    o.gamma1 = gamma;
    o.seed = config_.seed;
    o.schedule = config_.schedule;
    auto state = maxsum::init_state(inst_, o);
    maxsum::StabilityMonitor monitor(config_.window);
    const bool needs_nodes = std::any_of(variants.begin(), variants.end(), [](const Variant& v) {
      return v.extraction == Extraction::MstNodes || v.extraction == Extraction::Gw;
    });
    double best = kInf;
    for (std::int64_t it = 0; it < cap; ++it) {
      maxsum::sweep(state, inst_);
      maxsum::reinforce(state);
      ++result_.iterations;
      const auto snap = maxsum::snapshot(state, inst_, needs_nodes);
      double extracted = kInf;
      for (const auto& v : variants) {
        auto c = heuristics::evaluate(inst_, extract(v, snap));
        if (c.feasible) {
          best = std::min(best, c.energy);
          extracted = std::min(extracted, c.energy);
        }
        record(v.label, c, depth, gamma);
      }
      const auto rep = maxsum::decisional_variables(state);
      if (monitor.push(rep)) {
        result_.converged = true;
        if (validate_representation(inst_, rep, model)) {
          auto c = heuristics::evaluate(inst_, representation_to_subgraph(inst_, rep).tree);
          result_.decisional_energy = c.energy;
          result_.extracted_at_convergence = std::isfinite(extracted) ? std::optional<double>(extracted) : std::nullopt;
          if (c.feasible) best = std::min(best, c.energy);
          record(model == Model::Flat ? "FMS" : "MS", c, depth, gamma);
        }
        break;
      }
      if (expired()) break;
    }
    return best;
  }

  SolutionTree extract(const Variant& v, const maxsum::FieldSnapshot& snap) const {
    switch (v.extraction) {
      case Extraction::MstEdges: return heuristics::extract_mst(inst_, heuristics::reweight_edges(inst_, snap));
      case Extraction::MstNodes: return heuristics::extract_mst(inst_, heuristics::reweight_nodes(inst_, snap));
      case Extraction::SptEdges: return heuristics::extract_spt(inst_, heuristics::reweight_edges(inst_, snap));
      case Extraction::Gw: return heuristics::extract_gw(inst_, snap);
    }
    return SolutionTree::singleton(snap.root, inst_.num_vertices());
  }

  const Instance& inst_;
  const SolverConfig& config_;
  RunResult& result_;
  Clock::time_point t0_;
  Clock::time_point deadline_;
};

}  // namespace

RunResult run(const Instance& input, const SolverConfig& config) {
  validate(config);
  const auto variants = parse_variants(config.variant, input.kind());
  const auto t0 = Clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(config.time_limit));

  RunResult result;
  if (config.root) {
    result.root = *config.root;
  } else if (input.root()) {
    result.root = *input.root();
  } else if (input.kind() == ProblemKind::SPG) {
    result.root = root_spg(input);
  } else if (input.profitable().empty()) {
    result.root = 0;
  } else {
    const double mu = config.mu ? *config.mu : 2.0 * (input.total_cost() + 1.0);
    result.root = root_pcspg(input, mu, std::min(0.1 * config.time_limit, 60.0), config.seed);
  }
  if (result.root < 0 || result.root >= input.num_vertices()) throw ConfigError("root out of range");
  const Instance inst = input.with_root(result.root);

  result.best = SolutionTree::singleton(result.root, inst.num_vertices());
  auto trivial = heuristics::evaluate(inst, result.best);
  result.energy = trivial.energy;
  result.feasible = trivial.feasible;
  result.trace.push_back({seconds_since(t0), 0, "root", trivial.energy, trivial.feasible, 0, 0.0});

  std::vector<Model> models;
  for (const auto& v : variants)
    if (std::find(models.begin(), models.end(), v.model) == models.end()) models.push_back(v.model);
  Campaign campaign(inst, config, result, t0);
  for (std::size_t g = 0; g < models.size(); ++g) {
    std::vector<Variant> group;
    for (const auto& v : variants)
      if (v.model == models[g]) group.push_back(v);
    const auto now = Clock::now();
    const auto share = (deadline - now) / static_cast<std::int64_t>(models.size() - g);
    campaign.run(models[g], group, now + share);
  }
  return result;
}

GapReport compare(const std::vector<TraceRecord>& x, const std::vector<TraceRecord>& y) {
  auto scan = [](const std::vector<TraceRecord>& t, bool& feasible, std::optional<double>& final_pb,
                 std::optional<double>& first) {
    for (const auto& r : t) {
      if (!r.feasible) continue;
      if (!first) first = r.time_s;
      if (!final_pb || r.energy < *final_pb) final_pb = r.energy;
    }
    feasible = final_pb.has_value();
  };
  GapReport rep;
  scan(x, rep.feasible_x, rep.final_x, rep.first_feasible_x);
  scan(y, rep.feasible_y, rep.final_y, rep.first_feasible_y);
  if (rep.final_x && rep.final_y && *rep.final_y != 0.0) rep.gap = gap(*rep.final_x, *rep.final_y);
  return rep;
}

}  // namespace msteiner::driver
