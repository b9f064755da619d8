#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace msteiner::cli {

/// Runs one msteiner command line (args excludes the program name).
/// Exit status: 0 feasible / success, 2 infeasible, 1 any error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The `GAP` line value: gap rounded to two decimals.
std::string format_gap(double x, double y);

}  // namespace msteiner::cli
