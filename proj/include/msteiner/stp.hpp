#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "msteiner/instance.hpp"
#include "msteiner/tree.hpp"

namespace msteiner {

/// Reads a SteinLib `.stp` stream. `T i` lines make an SPG, `TP i p` lines a
/// PCSPG (RSTP when a `Root` is also given). Throws ParseError with a line number.
Instance parse_stp(std::istream& in);
Instance parse_stp_string(const std::string& text);
Instance read_stp_file(const std::filesystem::path& path);

/// Canonical SteinLib rendering; parse_stp(write_stp(x)) reproduces x.
void write_stp(std::ostream& out, const Instance& inst);
std::string to_stp_string(const Instance& inst);

/// `VALUE <energy>` followed by one `EDGE <child> <parent>` line per tree edge, in external ids.
void write_solution(std::ostream& out, const Instance& inst, const SolutionTree& tree);

/// Shortest decimal text that reads back to the same double.
std::string format_real(double v);
/// Fixed six-decimal rendering used by solution and trace files.
std::string format_fixed6(double v);

}  // namespace msteiner
