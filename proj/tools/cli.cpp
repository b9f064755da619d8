#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "msteiner/driver.hpp"
#include "msteiner/errors.hpp"
#include "msteiner/generators.hpp"
#include "msteiner/stp.hpp"

namespace msteiner::cli {

std::string format_gap(double x, double y) {
  char buf[64];
  double g = gap(x, y);
  std::snprintf(buf, sizeof buf, "%.2f", g);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

namespace {

struct SolveArgs {
  std::string file;
  std::string variant = "O";
  std::string scheme = "increasing";
  double time = 10.0;
  std::uint64_t seed = 1;
  std::optional<std::int32_t> depth;
  std::optional<double> gamma1;
  std::string trace, solution;
  std::optional<double> baseline;
};

struct GridArgs {
  std::int32_t nx = 0, ny = 0, nz = 1, terminals = 0;
  std::vector<double> prizes;
  std::uint64_t seed = 1;
  std::string out;
};

struct SfArgs {
  std::int32_t n = 0, m = 0, terminals = 0;
  std::vector<double> prizes;
  std::uint64_t seed = 1;
  std::string out;
};

void write_to(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = read_stp_file(a.file);
  driver::SolverConfig cfg;
  cfg.variant = a.variant;
  if (a.scheme == "increasing") cfg.scheme = driver::Scheme::Increasing;
  else if (a.scheme == "bounded") cfg.scheme = driver::Scheme::Bounded;
  else throw ConfigError("scheme must be 'increasing' or 'bounded'");
  cfg.time_limit = a.time;
  cfg.seed = a.seed;
  cfg.depth = a.depth;
  if (a.gamma1) {
    cfg.gamma1_start = *a.gamma1;
    cfg.gamma1_min = std::min(cfg.gamma1_min, *a.gamma1);
  }
  driver::parse_variants(cfg.variant, inst.kind());
  driver::validate(cfg);
  const auto result = driver::run(inst, cfg);
  const Instance rooted = inst.with_root(result.root);
  if (!a.solution.empty()) {
    std::ostringstream sol;
    write_solution(sol, rooted, result.best);
    write_to(a.solution, sol.str(), out);
  }
  if (!a.trace.empty()) {
    std::ostringstream csv;
    driver::write_trace_csv(csv, result.trace);
    write_to(a.trace, csv.str(), out);
  }
  if (!result.feasible) {
    err << "no feasible tree found\n";
    out << "PB inf\n";
    return 2;
  }
  out << "PB " << format_fixed6(result.energy) << "\n";
  if (a.baseline)
    out << "GAP " << format_fixed6(result.energy) << ' ' << format_fixed6(*a.baseline) << ' '
        << format_gap(result.energy, *a.baseline) << "\n";
  return 0;
}

generators::PrizeRange prize_range(const std::vector<double>& p) {
  if (p.empty()) return std::nullopt;
  return std::make_pair(p[0], p[1]);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reinforced max-sum solver for Steiner tree problems", "msteiner"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "solve an STP instance");
  solve_cmd->add_option("file", sa.file, "instance in SteinLib .stp format")->required();
  solve_cmd->add_option("--variant", sa.variant, "comma-separated labels among O, N, J, W, F, FN, FJ, FW");
  solve_cmd->add_option("--scheme", sa.scheme, "increasing | bounded")->check(CLI::IsMember({"increasing", "bounded"}));
  solve_cmd->add_option("--time", sa.time, "time limit in seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", sa.seed, "random seed");
  solve_cmd->add_option("--depth", sa.depth, "starting depth bound (default D_min)");
  solve_cmd->add_option("--gamma1", sa.gamma1, "starting reinforcement slope");
  solve_cmd->add_option("--trace", sa.trace, "write the primal-bound trace CSV here");
  solve_cmd->add_option("--solution", sa.solution, "write the solution here");
  solve_cmd->add_option("--baseline", sa.baseline, "reference energy for the GAP line");

  auto* gen = app.add_subcommand("generate", "write a random benchmark instance");
  gen->require_subcommand(1);
  GridArgs ga;
  auto* grid_cmd = gen->add_subcommand("grid", "2-d or 3-d lattice");
  grid_cmd->add_option("--nx", ga.nx)->required()->check(CLI::PositiveNumber);
  grid_cmd->add_option("--ny", ga.ny)->required()->check(CLI::PositiveNumber);
  grid_cmd->add_option("--nz", ga.nz)->check(CLI::PositiveNumber);
  grid_cmd->add_option("--terminals", ga.terminals)->required()->check(CLI::NonNegativeNumber);
  grid_cmd->add_option("--prizes", ga.prizes, "prize range lo hi (makes a PCSPG)")->expected(2);
  grid_cmd->add_option("--seed", ga.seed);
  grid_cmd->add_option("--out", ga.out, "output file (default stdout)");
  SfArgs fa;
  auto* sf_cmd = gen->add_subcommand("sf", "Barabasi-Albert scale-free graph");
  sf_cmd->add_option("--n", fa.n)->required()->check(CLI::PositiveNumber);
  sf_cmd->add_option("--m", fa.m)->required()->check(CLI::PositiveNumber);
  sf_cmd->add_option("--terminals", fa.terminals)->required()->check(CLI::NonNegativeNumber);
  sf_cmd->add_option("--prizes", fa.prizes, "prize range lo hi (makes a PCSPG)")->expected(2);
  sf_cmd->add_option("--seed", fa.seed);
  sf_cmd->add_option("--out", fa.out, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*solve_cmd) return solve(sa, out, err);
    if (*grid_cmd) {
      write_to(ga.out, to_stp_string(generators::grid(ga.nx, ga.ny, ga.nz, ga.terminals, prize_range(ga.prizes), ga.seed)), out);
      return 0;
    }
    if (*sf_cmd) {
      write_to(fa.out, to_stp_string(generators::scale_free(fa.n, fa.m, fa.terminals, prize_range(fa.prizes), fa.seed)), out);
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    out << "PB inf\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace msteiner::cli
