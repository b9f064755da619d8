#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "msteiner/driver.hpp"
#include "msteiner/engine.hpp"
#include "msteiner/extended.hpp"
#include "msteiner/generators.hpp"
#include "msteiner/heuristics.hpp"
#include "msteiner/oracle.hpp"
#include "support.hpp"

using namespace msteiner;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::int32_t> hops_from(const Instance& inst, Vertex source) {
  std::vector<std::int32_t> hops(inst.num_vertices(), -1);
  std::deque<Vertex> queue{source};
  hops[source] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (Slot s : inst.out_slots(v))
      if (hops[inst.head(s)] < 0) {
        hops[inst.head(s)] = hops[v] + 1;
        queue.push_back(inst.head(s));
      }
  }
  return hops;
}

// Exact optimum of an unrooted instance: the best rooted optimum over every admissible root.
double unrooted_optimum(const Instance& inst) {
  if (inst.root()) return oracle::brute_force_optimum(inst).cost;
  std::vector<Vertex> roots = inst.kind() == ProblemKind::SPG ? inst.terminals() : std::vector<Vertex>{};
  if (roots.empty())
    for (Vertex v = 0; v < inst.num_vertices(); ++v) roots.push_back(v);
  double best = std::numeric_limits<double>::infinity();
  for (Vertex r : roots) best = std::min(best, oracle::brute_force_optimum(inst.with_root(r)).cost);
  return best;
}

Instance unrooted_spg(std::mt19937_64& rng, Vertex n, std::int32_t extra, std::int32_t terminals) {
  auto d = testing::random_spg(rng, n, extra, terminals).data();
  d.root.reset();
  return Instance(std::move(d));
}

Instance unrooted_pcspg(std::mt19937_64& rng, Vertex n, std::int32_t extra, double prize_hi) {
  auto d = testing::random_rstp(rng, n, extra, prize_hi).data();
  d.root.reset();
  d.kind = ProblemKind::PCSPG;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  d.prizes[0] = u(rng) * prize_hi;
  return Instance(std::move(d));
}

// 1. Spanning-tree exactness.
Verdict spanning_tree_exactness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  int exact = 0, converged = 0;
  double worst = 0.0;
  const int total = 50;
  for (int k = 0; k < total; ++k) {
    const Vertex n = std::uniform_int_distribution<Vertex>(10, 40)(rng);
    Instance::Data d;
    d.num_vertices = n;
    d.edges = testing::random_connected_edges(rng, n, n);
    std::uniform_real_distribution<double> prize(10.0 * n, 20.0 * n);
    d.prizes.resize(n);
    for (auto& c : d.prizes) c = prize(rng);
    d.root = 0;
    d.kind = ProblemKind::RSTP;
    Instance inst(std::move(d));
    driver::SolverConfig cfg;
    cfg.variant = "O";
    cfg.scheme = driver::Scheme::Bounded;
    cfg.depth = n - 1;
    cfg.plain_iterations = 2000;
    cfg.time_limit = 10.0;
    const auto res = driver::run(inst, cfg);
    const double mst = oracle::reference_mst(inst).cost;
    if (res.converged && res.decisional_energy) {
      ++converged;
      const double err = std::abs(*res.decisional_energy - mst);
      worst = std::max(worst, err);
      if (err <= 1e-6) ++exact;
    }
  }
  const double secs = seconds_since(t0);
  return {exact == total && secs < 60.0,
          std::to_string(exact) + "/" + std::to_string(total) + " decisional trees equal the Kruskal MST (converged " +
              std::to_string(converged) + ", worst error " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s)"};
}

// 2. Oracle optimality at desk scale.
Verdict oracle_optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  int exact = 0, within = 0;
  double worst = 0.0;
  const int total = 100;
  for (int k = 0; k < total; ++k) {
    const Vertex n = std::uniform_int_distribution<Vertex>(5, 12)(rng);
    const std::int32_t extra = std::uniform_int_distribution<std::int32_t>(n / 2, n)(rng);
    const bool spg = k % 2 == 0;
    Instance inst = spg ? unrooted_spg(rng, n, extra, std::uniform_int_distribution<std::int32_t>(2, n / 2 + 1)(rng))
                        : unrooted_pcspg(rng, n, extra, 1.5);
    driver::SolverConfig cfg;
    cfg.variant = spg ? "O,N,J,F,FN,FJ" : "O,N,J,W,F,FN,FJ,FW";
    cfg.time_limit = 4.0;
    const auto res = driver::run(inst, cfg);
    const double opt = unrooted_optimum(inst);
    const double rel = res.feasible ? (res.energy - opt) / std::max(opt, 1e-12) : std::numeric_limits<double>::infinity();
    worst = std::max(worst, rel);
    if (res.feasible && res.energy <= opt + 1e-9 * std::max(1.0, std::abs(opt))) ++exact;
    if (rel <= 0.05 + 1e-12) ++within;
  }
  const double secs = seconds_since(t0);
  return {exact >= 90 && within == total && secs < 600.0,
          std::to_string(exact) + "/" + std::to_string(total) + " optimal, " + std::to_string(within) +
              " within 5% (worst " + fmt("%.2f", 100.0 * worst) + "%, " + fmt("%.1f", secs) + " s)"};
}

bool same_entry(double a, double b) {
  if (ext::is_neg(a) || ext::is_neg(b)) return ext::is_neg(a) && ext::is_neg(b);
  return std::abs(a - b) <= 1e-12;
}

// 3. Amortized-update equivalence.
Verdict amortized_equivalence() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked[2] = {0, 0}, agreed[2] = {0, 0};
  const int target = 1000;
  for (int mi = 0; mi < 2; ++mi) {
    const Model model = mi == 0 ? Model::Normal : Model::Flat;
    while (checked[mi] < target) {
      const Vertex n = std::uniform_int_distribution<Vertex>(2, 9)(rng);
      auto inst = testing::random_rstp(rng, n, std::uniform_int_distribution<int>(0, 4)(rng), 2.0, 0.5);
      maxsum::EngineOptions o;
      o.depth = std::uniform_int_distribution<int>(1, 3)(rng);
      o.model = model;
      o.schedule = maxsum::Schedule::Synchronous;
      o.seed = rng();
      auto state = maxsum::init_state(inst, o);
      for (Slot s = 0; s < inst.num_slots(); ++s) {
        auto row = state.messages.row(s);
        for (auto& x : row) x = u(rng) < 0.2 ? ext::kNeg : -3.0 * u(rng);
        if (u(rng) < 0.5) row[o.depth] = 0.0;
        maxsum::normalize(row);
        auto fb = state.feedback.row(s);
        for (auto& x : fb) x = u(rng) < 0.5 ? 0.0 : -0.1 * u(rng);
      }
      const auto before = state;
      maxsum::sweep(state, inst);
      const int width = 2 * o.depth + 1;
      for (Vertex v = 0; v < n && checked[mi] < target; ++v) {
        if (inst.degree(v) > 4) continue;
        const auto ref = oracle::exhaustive_update(inst, before, v);
        const auto slots = inst.out_slots(v);
        bool ok = true;
        for (std::size_t a = 0; a < slots.size(); ++a)
          for (int k = 0; k < width; ++k) ok = ok && same_entry(state.messages.row(slots[a])[k], ref[a * width + k]);
        ++checked[mi];
        if (ok) ++agreed[mi];
      }
    }
  }
  return {agreed[0] == target && agreed[1] == target,
          "normal " + std::to_string(agreed[0]) + "/" + std::to_string(target) + ", flat " +
              std::to_string(agreed[1]) + "/" + std::to_string(target) + " neighbourhoods agree to 1e-12"};
}

// Long path from the root with a few short chords and up to four terminals; the
// farthest terminal sits at least 3|K| hops out.
Instance long_path_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const Vertex n = std::uniform_int_distribution<Vertex>(12, 14)(rng);
    Instance::Data d;
    d.num_vertices = n;
    for (Vertex v = 1; v < n; ++v) {
      const double w = 0.05 + u(rng);
      d.edges.push_back({v - 1, v, w, w});
    }
    const int chords = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int c = 0; c < chords; ++c) {
      const Vertex a = std::uniform_int_distribution<Vertex>(0, n - 3)(rng);
      const Vertex b = a + std::uniform_int_distribution<Vertex>(2, 3)(rng);
      if (b >= n) continue;
      const bool dup = std::any_of(d.edges.begin(), d.edges.end(), [&](const EdgeSpec& e) { return e.u == a && e.v == b; });
      if (dup) continue;
      const double w = 0.05 + 2.0 * u(rng);
      d.edges.push_back({a, b, w, w});
    }
    const std::int32_t k = std::uniform_int_distribution<std::int32_t>(1, 4)(rng);
    d.prizes.assign(n, 0.0);
    d.terminal.assign(n, 0);
    d.terminal[0] = 1;
    d.terminal[n - 1] = 1;
    std::vector<Vertex> mids;
    for (Vertex v = 1; v < n - 1; ++v) mids.push_back(v);
    std::shuffle(mids.begin(), mids.end(), rng);
    for (std::int32_t t = 0; t + 1 < k; ++t) d.terminal[mids[t]] = 1;
    d.root = 0;
    d.kind = ProblemKind::SPG;
    Instance inst(std::move(d));
    const auto hops = hops_from(inst, 0);
    std::int32_t far = 0;
    for (Vertex t : inst.terminals()) far = std::max(far, hops[t]);
    if (far >= 3 * k) return inst;
  }
}

// 4. Flat-model completeness.
Verdict flat_completeness() {
  std::mt19937_64 rng(404);
  int not_worse = 0, flat_converged = 0, converged_optimal = 0;
  const int total = 50;
  for (int k = 0; k < total; ++k) {
    auto inst = long_path_instance(rng);
    driver::SolverConfig flat;
    flat.variant = "F";
    flat.scheme = driver::Scheme::Bounded;
    flat.time_limit = 5.0;
    auto normal = flat;
    normal.variant = "O";
    const auto rf = driver::run(inst, flat);
    const auto rn = driver::run(inst, normal);
    if (rf.feasible && (!rn.feasible || rf.energy <= rn.energy + 1e-9)) ++not_worse;
    if (rf.converged) {
      ++flat_converged;
      if (rf.energy <= oracle::brute_force_optimum(inst).cost + 1e-9) ++converged_optimal;
    }
  }
  return {not_worse == total && converged_optimal == flat_converged,
          std::to_string(not_worse) + "/" + std::to_string(total) + " flat (D=|K|) not worse than normal (D=D_min); " +
              std::to_string(converged_optimal) + "/" + std::to_string(flat_converged) + " converged flat runs optimal"};
}

// 5. Anytime feasibility and convergence consistency.
Verdict anytime_feasibility() {
  std::mt19937_64 rng(505);
  std::vector<Instance> instances;
  for (int k = 0; k < 20; ++k) instances.push_back(unrooted_spg(rng, std::uniform_int_distribution<Vertex>(8, 30)(rng), 12, 4));
  for (int k = 0; k < 20; ++k) instances.push_back(unrooted_pcspg(rng, std::uniform_int_distribution<Vertex>(8, 30)(rng), 12, 1.5));
  for (int k = 0; k < 5; ++k) instances.push_back(generators::grid(10, 10, 1, 8, std::nullopt, 900 + k));
  for (int k = 0; k < 5; ++k) instances.push_back(generators::scale_free(150, 2, 10, std::make_pair(0.0, 3.0), 950 + k));
  int early = 0, monotone = 0, converged = 0, consistent = 0;
  for (const auto& inst : instances) {
    driver::SolverConfig cfg;
    cfg.variant = "O";
    cfg.time_limit = 3.0;
    const auto res = driver::run(inst, cfg);
    bool found = false;
    for (const auto& r : res.trace)
      if (r.label != "root" && r.iter >= 1 && r.iter <= 3 && r.feasible) found = true;
    if (found) ++early;
    bool mono = true;
    double envelope = std::numeric_limits<double>::infinity(), last_time = 0.0;
    std::int64_t last_iter = 0;
    for (const auto& r : res.trace) {
      mono = mono && r.time_s >= last_time && r.iter >= last_iter;
      last_time = r.time_s;
      last_iter = r.iter;
      if (r.feasible) envelope = std::min(envelope, r.energy);
    }
    mono = mono && (!res.feasible || envelope == res.energy);
    if (mono) ++monotone;
    if (res.decisional_energy) {
      ++converged;
      if (res.extracted_at_convergence && std::abs(*res.extracted_at_convergence - *res.decisional_energy) <= 1e-9)
        ++consistent;
    }
  }
  const int total = static_cast<int>(instances.size());
  return {early == total && monotone == total && consistent == converged,
          std::to_string(early) + "/" + std::to_string(total) + " feasible within 3 rounds, " + std::to_string(monotone) +
              "/" + std::to_string(total) + " monotone envelopes, " + std::to_string(consistent) + "/" +
              std::to_string(converged) + " converged runs with pruned-MST energy equal to the decisional tree"};
}

double sweep_seconds(const Instance& inst, std::int32_t depth) {
  maxsum::EngineOptions o;
  o.depth = depth;
  auto state = maxsum::init_state(inst, o);
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 7; ++rep) {
    const auto t0 = Clock::now();
    for (int k = 0; k < 10; ++k) maxsum::sweep(state, inst);
    best = std::min(best, seconds_since(t0) / 10.0);
  }
  return best;
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k] / n;
    my += y[k] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  return syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
}

Instance timing_instance(std::int32_t edges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Vertex n = edges / 4;
  Instance::Data d;
  d.num_vertices = n;
  d.edges = testing::random_connected_edges(rng, n, 4 * edges);
  d.edges.resize(std::min<std::size_t>(d.edges.size(), static_cast<std::size_t>(edges)));
  d.prizes.assign(n, 0.5);
  d.root = 0;
  d.kind = ProblemKind::RSTP;
  return Instance(std::move(d));
}

// 6. Per-iteration scaling.
Verdict sweep_scaling() {
  const auto fixed = timing_instance(4000, 606);
  std::vector<double> xd, td;
  for (int depth : {4, 8, 16}) {
    xd.push_back(2.0 * depth + 1.0);
    td.push_back(sweep_seconds(fixed, depth));
  }
  std::vector<double> xe, te;
  for (int edges : {1000, 2000, 4000}) {
    const auto inst = timing_instance(edges, 607);
    xe.push_back(static_cast<double>(inst.num_edges()));
    te.push_back(sweep_seconds(inst, 8));
  }
  const double r2d = r_squared(xd, td), r2e = r_squared(xe, te);
  const double ratio_d = (td.back() / td.front()) / (xd.back() / xd.front());
  const double ratio_e = (te.back() / te.front()) / (xe.back() / xe.front());
  auto within = [](double r) { return r >= 1.0 / 1.5 && r <= 1.5; };
  return {r2d >= 0.95 && r2e >= 0.95 && within(ratio_d) && within(ratio_e),
          "depth: R^2 " + fmt("%.4f", r2d) + ", slope ratio " + fmt("%.3f", ratio_d) + "; edges: R^2 " +
              fmt("%.4f", r2e) + ", slope ratio " + fmt("%.3f", ratio_e) + " (sweep at D=4 " +
              fmt("%.2e", td.front()) + " s)"};
}

// 7. MS-guided MST against the raw pruned MST.
Verdict reweighting_beats_raw() {
  int better = 0;
  const int total = 30;
  double guided_sum = 0.0, raw_sum = 0.0;
  for (int k = 0; k < total; ++k) {
    const std::int32_t terminals = 10 + 5 * (k % 5);
    Instance inst = k % 2 == 0 ? generators::grid(32, 32, 1, terminals, std::nullopt, 700 + k)
                               : generators::scale_free(1000, 2, terminals, std::nullopt, 700 + k);
    driver::SolverConfig cfg;
    cfg.variant = "O";
    cfg.time_limit = 3.0;
    const auto res = driver::run(inst, cfg);
    const auto rooted = inst.with_root(res.root);
    const auto raw = heuristics::evaluate(rooted, heuristics::extract_mst(rooted, heuristics::raw_view(rooted)));
    if (res.feasible && raw.feasible && res.energy <= raw.energy + 1e-9) ++better;
    guided_sum += res.energy;
    raw_sum += raw.energy;
  }
  return {better >= 27, std::to_string(better) + "/" + std::to_string(total) +
                            " instances with guided MST not worse than raw (mean " + fmt("%.3f", guided_sum / total) +
                            " vs " + fmt("%.3f", raw_sum / total) + ")"};
}

// 8. Gap metric.
Verdict gap_metric() {
  const std::string g = cli::format_gap(121056, 121091);
  const double rounded = std::round(gap(121056, 121091) * 100.0) / 100.0;
  bool zero = true;
  for (double x : {1e-6, 0.5, 3.0, 121091.0, 1e12}) zero = zero && gap(x, x) == 0.0 && cli::format_gap(x, x) == "0.00";
  return {g == "-0.03" && rounded == -0.03 && zero, "gap(121056, 121091) = " + g + ", gap(x, x) = 0 on 5 values"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"spanning-tree exactness", spanning_tree_exactness},
      {"oracle optimality", oracle_optimality},
      {"amortized-update equivalence", amortized_equivalence},
      {"flat-model completeness", flat_completeness},
      {"anytime feasibility", anytime_feasibility},
      {"per-iteration scaling", sweep_scaling},
      {"MS-guided beats raw MST", reweighting_beats_raw},
      {"gap metric", gap_metric},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << (k + 1) << ": " << criteria[k].first << ": "
              << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
