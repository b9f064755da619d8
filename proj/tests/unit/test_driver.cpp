#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "msteiner/driver.hpp"
#include "msteiner/errors.hpp"
#include "msteiner/oracle.hpp"
#include "support.hpp"

using namespace msteiner;
using namespace msteiner::driver;

namespace {

Instance make(Vertex n, std::vector<EdgeSpec> edges, std::vector<double> prizes, ProblemKind kind,
              std::optional<Vertex> root = std::nullopt, std::vector<char> terminal = {}) {
  Instance::Data d;
  d.num_vertices = n;
  d.edges = std::move(edges);
  d.prizes = std::move(prizes);
  d.terminal = std::move(terminal);
  d.root = root;
  d.kind = kind;
  return Instance(std::move(d));
}

std::vector<EdgeSpec> path_edges(Vertex n, double w = 1.0) {
  std::vector<EdgeSpec> e;
  for (Vertex v = 1; v < n; ++v) e.push_back({v - 1, v, w, w});
  return e;
}

SolverConfig quick(const std::string& variant, double time = 5.0) {
  SolverConfig c;
  c.variant = variant;
  c.time_limit = time;
  return c;
}

}  // namespace

TEST_CASE("parse_variants grammar") {
  auto v = parse_variants("O,N,J,W", ProblemKind::PCSPG);
  REQUIRE(v.size() == 4);
  CHECK(v[0].extraction == Extraction::MstEdges);
  CHECK(v[1].extraction == Extraction::MstNodes);
  CHECK(v[2].extraction == Extraction::SptEdges);
  CHECK(v[3].extraction == Extraction::Gw);
  for (const auto& x : v) CHECK(x.model == Model::Normal);

  auto f = parse_variants("F, FN ,JF,fw", ProblemKind::PCSPG);
  REQUIRE(f.size() == 4);
  for (const auto& x : f) CHECK(x.model == Model::Flat);
  CHECK(f[0].label == "F");
  CHECK(f[0].extraction == Extraction::MstEdges);
  CHECK(f[1].label == "FN");
  CHECK(f[2].label == "FJ");
  CHECK(f[3].label == "FW");

  CHECK(parse_variants("O,O", ProblemKind::SPG).size() == 1);
  CHECK_THROWS_AS(parse_variants("W", ProblemKind::SPG), ConfigError);
  CHECK_THROWS_AS(parse_variants("FW", ProblemKind::SPG), ConfigError);
  CHECK_THROWS_AS(parse_variants("FO", ProblemKind::PCSPG), ConfigError);
  CHECK_THROWS_AS(parse_variants("NJ", ProblemKind::PCSPG), ConfigError);
  CHECK_THROWS_AS(parse_variants("X", ProblemKind::PCSPG), ConfigError);
  CHECK_THROWS_AS(parse_variants("O,", ProblemKind::PCSPG), ConfigError);
  CHECK_THROWS_AS(parse_variants("", ProblemKind::PCSPG), ConfigError);
}

TEST_CASE("validate rejects bad configurations") {
  SolverConfig c;
  CHECK_NOTHROW(validate(c));
  auto bad = c;
  bad.gamma1_min = 0.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.gamma1_start = 1e-6;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.time_limit = 0.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.depth = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("root_spg examples") {
  SUBCASE("path of three terminals picks the middle") {
    auto inst = make(3, path_edges(3), {0, 0, 0}, ProblemKind::SPG, std::nullopt, {1, 1, 1});
    CHECK(root_spg(inst) == 1);
  }
  SUBCASE("single terminal is its own root") {
    auto inst = make(4, path_edges(4), {0, 0, 0, 0}, ProblemKind::SPG, std::nullopt, {0, 0, 1, 0});
    CHECK(root_spg(inst) == 2);
  }
  SUBCASE("star with a terminal centre picks the centre") {
    std::vector<EdgeSpec> e{{0, 1, 1, 1}, {0, 2, 1, 1}, {0, 3, 1, 1}, {0, 4, 1, 1}};
    auto inst = make(5, e, std::vector<double>(5, 0.0), ProblemKind::SPG, std::nullopt, {1, 1, 1, 1, 1});
    CHECK(root_spg(inst) == 0);
  }
  SUBCASE("ties go to the lowest id") {
    auto inst = make(2, path_edges(2), {0, 0}, ProblemKind::SPG, std::nullopt, {1, 1});
    CHECK(root_spg(inst) == 0);
  }
}

TEST_CASE("root_pcspg examples") {
  SUBCASE("single profitable vertex") {
    auto inst = make(4, path_edges(4), {0, 0, 3, 0}, ProblemKind::PCSPG);
    CHECK(root_pcspg(inst, 100.0, 1.0) == 2);
  }
  SUBCASE("rich cheap cluster beats an isolated vertex") {
    // 0-1-2 cheap triangle with prizes 5 each; 3 hangs off 2 through an expensive edge with prize 1.
    std::vector<EdgeSpec> e{{0, 1, 0.1, 0.1}, {1, 2, 0.1, 0.1}, {0, 2, 0.1, 0.1}, {2, 3, 8, 8}};
    auto inst = make(4, e, {5, 5, 5, 1}, ProblemKind::PCSPG);
    const Vertex r = root_pcspg(inst, 2.0 * (inst.total_cost() + 1.0), 2.0);
    CHECK(r != 3);
    auto opt = oracle::brute_force_optimum(inst.with_root(r));
    CHECK(opt.tree.size() == 3);
  }
  SUBCASE("no profitable vertices") {
    auto inst = make(2, path_edges(2), {0, 0}, ProblemKind::PCSPG);
    CHECK_THROWS_AS(root_pcspg(inst, 10.0, 1.0), ConfigError);
  }
}

TEST_CASE("compute_dmin examples") {
  SUBCASE("star rooted at the centre") {
    std::vector<EdgeSpec> e{{0, 1, 1, 1}, {0, 2, 1, 1}, {0, 3, 1, 1}};
    auto inst = make(4, e, {0, 1, 1, 1}, ProblemKind::RSTP, 0);
    CHECK(compute_dmin(inst, 0, Model::Normal) == 1);
  }
  SUBCASE("path r-a-b with terminal b") {
    auto inst = make(3, path_edges(3), {0, 0, 0}, ProblemKind::SPG, 0, {1, 0, 1});
    CHECK(compute_dmin(inst, 0, Model::Normal) == 2);
  }
  SUBCASE("flat model on a long path uses the number of terminals") {
    std::vector<double> c(51, 0.0);
    std::vector<char> t(51, 0);
    t[0] = t[20] = t[35] = t[50] = 1;
    auto inst = make(51, path_edges(51), c, ProblemKind::SPG, 0, t);
    CHECK(compute_dmin(inst, 0, Model::Normal) == 50);
    CHECK(compute_dmin(inst, 0, Model::Flat) == 3);
  }
  SUBCASE("unreachable terminal is infeasible") {
    auto inst = make(3, path_edges(2), {0, 0, 0}, ProblemKind::SPG, 0, {1, 0, 1});
    CHECK_THROWS_AS(compute_dmin(inst, 0, Model::Normal), InfeasibleError);
  }
}

TEST_CASE("run: spanning-tree-forced instance gives the MST") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    Instance::Data d;
    d.num_vertices = 12;
    d.edges = testing::random_connected_edges(rng, 12, 12);
    d.prizes.assign(12, 100.0);
    d.prizes[0] = 0.0;
    d.root = 0;
    d.kind = ProblemKind::RSTP;
    Instance inst(std::move(d));
    auto cfg = quick("O", 20.0);
    cfg.scheme = Scheme::Bounded;
    cfg.depth = 12;
    auto res = run(inst, cfg);
    CHECK(res.feasible);
    CHECK(res.converged);
    CHECK(res.best.size() == 12);
    CHECK(res.energy == doctest::Approx(oracle::reference_mst(inst).cost).epsilon(1e-6));
  }
}

TEST_CASE("run: unprofitable PCSPG returns the root alone") {
  std::vector<EdgeSpec> e{{0, 1, 5, 5}, {1, 2, 5, 5}, {0, 2, 5, 5}};
  auto inst = make(3, e, {1, 2, 3}, ProblemKind::RSTP, 0);
  auto res = run(inst, quick("O,N,J,W", 2.0));
  CHECK(res.feasible);
  CHECK(res.best.size() == 1);
  CHECK(res.energy == doctest::Approx(5.0));
}

TEST_CASE("run: 8-vertex SPG instances reach the brute-force optimum") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = testing::random_spg(rng, 8, 6, 4);
    const auto opt = oracle::brute_force_optimum(inst);
    auto res = run(inst, quick("O,J", 5.0));
    CHECK(res.feasible);
    CHECK(is_feasible(inst, res.best));
    CHECK(res.energy == doctest::Approx(opt.cost).epsilon(1e-9));
  }
}

TEST_CASE("run: unreachable SPG terminal is infeasible") {
  auto inst = make(3, path_edges(2), {0, 0, 0}, ProblemKind::SPG, 0, {1, 0, 1});
  CHECK_THROWS_AS(run(inst, quick("O", 1.0)), InfeasibleError);
}

TEST_CASE("run: trace properties") {
  std::mt19937_64 rng(51);
  auto inst = testing::random_rstp(rng, 15, 10, 1.0);
  auto res = run(inst, quick("O,N,J", 5.0));
  REQUIRE(!res.trace.empty());
  CHECK(res.trace.front().label == "root");
  CHECK(res.trace.front().iter == 0);
  // the lower envelope of feasible energies never rises and ends at the reported best
  double envelope = std::numeric_limits<double>::infinity();
  double last_time = 0.0;
  for (const auto& r : res.trace) {
    CHECK(r.time_s >= last_time);
    last_time = r.time_s;
    if (r.feasible) {
      CHECK(std::isfinite(r.energy));
      envelope = std::min(envelope, r.energy);
    }
  }
  CHECK(envelope == res.energy);
  for (std::size_t k = 1; k < res.depths.size(); ++k) CHECK(res.depths[k] >= res.depths[k - 1]);
  for (std::size_t k = 1; k < res.gammas.size(); ++k)
    if (res.gammas[k] < res.gammas[k - 1]) CHECK(res.gammas[k] == doctest::Approx(res.gammas[k - 1] / 2));
  CHECK(res.depths.front() >= compute_dmin(inst, 0, Model::Normal));
  for (double g : res.gammas) {
    CHECK(g <= 1e-2);
    CHECK(g >= 1e-5);
  }
}

TEST_CASE("run: depth schedule grows by a quarter") {
  auto inst = make(30, path_edges(30, 1.0), std::vector<double>(30, 0.0), ProblemKind::RSTP, 0);
  auto data = inst.data();
  data.prizes[3] = 10.0;
  Instance one(data);
  auto res = run(one, quick("O", 10.0));
  REQUIRE(res.depths.size() >= 3);
  CHECK(res.depths[0] == 3);
  CHECK(res.depths[1] == 4);
  CHECK(res.depths[2] == 5);
  CHECK(res.depths.back() <= 29);
  auto bounded = quick("O", 10.0);
  bounded.scheme = Scheme::Bounded;
  CHECK(run(one, bounded).depths.size() == 1);
}

TEST_CASE("run: identical seeds give identical results") {
  std::mt19937_64 rng(61);
  auto inst = testing::random_rstp(rng, 14, 10, 1.0);
  auto a = run(inst, quick("O,N,J,W", 5.0));
  auto b = run(inst, quick("O,N,J,W", 5.0));
  CHECK(a.best == b.best);
  CHECK(a.energy == b.energy);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].energy == b.trace[k].energy);
    CHECK(a.trace[k].label == b.trace[k].label);
  }
}

TEST_CASE("trace CSV format") {
  std::vector<TraceRecord> t{{0.5, 3, "O", 1.25, true, 4, 0.01}, {1.0, 4, "FN", 2.0, false, 4, 0.005}};
  std::ostringstream out;
  write_trace_csv(out, t);
  CHECK(out.str() ==
        "time_s,iter,label,energy,feasible,D,gamma1\n"
        "0.500000,3,O,1.250000,1,4,0.01\n"
        "1.000000,4,FN,2.000000,0,4,0.005\n");
}

TEST_CASE("compare examples") {
  std::vector<TraceRecord> x{{0.1, 0, "root", 120.0, true, 0, 0.0}, {0.4, 5, "O", 95.0, true, 2, 0.01}};
  std::vector<TraceRecord> y{{0.2, 0, "root", 100.0, true, 0, 0.0}};
  SUBCASE("identical traces have zero gap") {
    auto r = compare(x, x);
    REQUIRE(r.gap);
    CHECK(*r.gap == 0.0);
  }
  SUBCASE("95 against 100 is -5") {
    auto r = compare(x, y);
    REQUIRE(r.gap);
    CHECK(*r.gap == doctest::Approx(-5.0));
    CHECK(*r.first_feasible_x == doctest::Approx(0.1));
    CHECK(*r.first_feasible_y == doctest::Approx(0.2));
  }
  SUBCASE("an infeasible trace has no gap") {
    std::vector<TraceRecord> z{{0.1, 0, "root", 1e9, false, 0, 0.0}};
    auto r = compare(x, z);
    CHECK_FALSE(r.feasible_y);
    CHECK_FALSE(r.gap);
  }
}
