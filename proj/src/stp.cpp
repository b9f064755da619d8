#include "msteiner/stp.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "msteiner/errors.hpp"

namespace msteiner {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

std::int64_t parse_int(const std::string& tok, std::size_t line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError(line, "expected integer, got '" + tok + "'");
  return v;
}

double parse_real(const std::string& tok, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError(line, "expected number, got '" + tok + "'");
  return v;
}

struct PendingEdge {
  std::optional<double> w_lo_hi;  // orientation min(u,v) -> max(u,v)
  std::optional<double> w_hi_lo;
  std::size_t line = 0;
};

}  // namespace

Instance parse_stp(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::string section;  // lower-case name of the open section, empty outside
  std::optional<std::int64_t> nodes, declared_edges, declared_arcs, declared_terminals;
  std::int64_t seen_e = 0, seen_a = 0;
  std::map<std::pair<Vertex, Vertex>, PendingEdge> pending;
  std::vector<std::pair<Vertex, Vertex>> order;
  std::vector<std::pair<Vertex, double>> prize_lines;
  std::vector<Vertex> terminal_lines;
  std::optional<Vertex> root;
  std::string name;
  bool eof = false;

  auto vertex_arg = [&](const std::string& tok) -> Vertex {
    if (!nodes) throw ParseError(line_no, "vertex reference before 'Nodes' declaration");
    const auto id = parse_int(tok, line_no);
    if (id < 1 || id > *nodes) throw ParseError(line_no, "vertex id " + tok + " out of range");
    return static_cast<Vertex>(id - 1);
  };
  auto need = [&](const std::vector<std::string>& t, std::size_t k) {
    if (t.size() != k) throw ParseError(line_no, "expected " + std::to_string(k - 1) + " arguments to '" + t[0] + "'");
  };

  while (!eof && std::getline(in, raw)) {
    ++line_no;
    const auto tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string key = lower(tok[0]);
    if (!header_seen) {
      if (tok[0] != "33D32945" && lower(tok[0]) != "33d32945")
        throw ParseError(line_no, "missing '33D32945 STP File' header");
      header_seen = true;
      continue;
    }
    if (section.empty()) {
      if (key == "eof") {
        eof = true;
      } else if (key == "section" && tok.size() >= 2) {
        section = lower(tok[1]);
      } else {
        throw ParseError(line_no, "expected 'SECTION' or 'EOF', got '" + tok[0] + "'");
      }
      continue;
    }
    if (key == "end") {
      section.clear();
      continue;
    }
    if (key == "section" || key == "eof") throw ParseError(line_no, "section '" + section + "' not closed by END");

    if (section == "comment") {
      if (key == "name" && tok.size() >= 2) {
        const auto pos = raw.find_first_of('"');
        const auto end = raw.find_last_of('"');
        name = (pos != std::string::npos && end > pos) ? raw.substr(pos + 1, end - pos - 1) : tok[1];
      }
    } else if (section == "graph") {
      if (key == "nodes") {
        need(tok, 2);
        nodes = parse_int(tok[1], line_no);
        if (*nodes < 1) throw ParseError(line_no, "node count must be positive");
      } else if (key == "edges") {
        need(tok, 2);
        declared_edges = parse_int(tok[1], line_no);
      } else if (key == "arcs") {
        need(tok, 2);
        declared_arcs = parse_int(tok[1], line_no);
      } else if (key == "e" || key == "a") {
        need(tok, 4);
        const Vertex a = vertex_arg(tok[1]);
        const Vertex b = vertex_arg(tok[2]);
        const double w = parse_real(tok[3], line_no);
        if (a == b) throw ParseError(line_no, "self-loop");
        if (!(w > 0.0)) throw ParseError(line_no, "edge weight must be positive");
        const auto keypair = std::make_pair(std::min(a, b), std::max(a, b));
        auto [it, fresh] = pending.try_emplace(keypair);
        if (fresh) {
          it->second.line = line_no;
          order.push_back(keypair);
        }
        auto& pe = it->second;
        if (key == "e") {
          ++seen_e;
          if (pe.w_lo_hi || pe.w_hi_lo) throw ParseError(line_no, "duplicate edge " + tok[1] + " " + tok[2]);
          pe.w_lo_hi = w;
          pe.w_hi_lo = w;
        } else {
          ++seen_a;
          // arc a -> b points away from the root: b hangs below a, so the slot b -> a costs w
          auto& slot = (b < a) ? pe.w_lo_hi : pe.w_hi_lo;
          if (slot) throw ParseError(line_no, "duplicate arc " + tok[1] + " " + tok[2]);
          slot = w;
        }
      } else {
        throw ParseError(line_no, "unknown Graph keyword '" + tok[0] + "'");
      }
    } else if (section == "terminals") {
      if (key == "terminals") {
        need(tok, 2);
        declared_terminals = parse_int(tok[1], line_no);
      } else if (key == "t") {
        need(tok, 2);
        terminal_lines.push_back(vertex_arg(tok[1]));
      } else if (key == "tp") {
        need(tok, 3);
        const Vertex v = vertex_arg(tok[1]);
        const double p = parse_real(tok[2], line_no);
        if (!(p >= 0.0)) throw ParseError(line_no, "prize must be non-negative");
        prize_lines.emplace_back(v, p);
      } else if (key == "root" || key == "rootp") {
        need(tok, 2);
        root = vertex_arg(tok[1]);
      } else {
        throw ParseError(line_no, "unknown Terminals keyword '" + tok[0] + "'");
      }
    }
    // other sections (Coordinates, Presolve, ...) are skipped
  }
  if (!header_seen) throw ParseError(line_no, "empty input");
  if (!section.empty()) throw ParseError(line_no, "unterminated section '" + section + "'");
  if (!nodes) throw ParseError(line_no, "missing 'Nodes' declaration");
  if (declared_edges && *declared_edges != seen_e)
    throw ParseError(line_no, "declared " + std::to_string(*declared_edges) + " edges, found " + std::to_string(seen_e));
  if (declared_arcs && *declared_arcs != seen_a)
    throw ParseError(line_no, "declared " + std::to_string(*declared_arcs) + " arcs, found " + std::to_string(seen_a));
  if (!terminal_lines.empty() && !prize_lines.empty())
    throw ParseError(line_no, "file mixes 'T' and 'TP' terminal lines");
  const auto n_terms = static_cast<std::int64_t>(terminal_lines.size() + prize_lines.size());
  if (declared_terminals && *declared_terminals != n_terms)
    throw ParseError(line_no, "declared " + std::to_string(*declared_terminals) + " terminals, found " + std::to_string(n_terms));

  Instance::Data data;
  data.num_vertices = static_cast<Vertex>(*nodes);
  data.name = name;
  data.root = root;
  data.prizes.assign(data.num_vertices, 0.0);

  // orientations missing from arc-only files get a weight no tree can afford
  double given = 1.0;
  for (const auto& k : order) {
    const auto& pe = pending[k];
    given += pe.w_lo_hi.value_or(0.0) + pe.w_hi_lo.value_or(0.0);
  }
  for (const auto& [v, p] : prize_lines) given += p;
  for (const auto& k : order) {
    const auto& pe = pending[k];
    data.edges.push_back({k.first, k.second, pe.w_lo_hi.value_or(given), pe.w_hi_lo.value_or(given)});
  }

  if (!terminal_lines.empty()) {
    data.kind = ProblemKind::SPG;
    data.terminal.assign(data.num_vertices, 0);
    for (Vertex v : terminal_lines) {
      if (data.terminal[v]) throw ParseError(line_no, "terminal listed twice");
      data.terminal[v] = 1;
    }
  } else {
    data.kind = root ? ProblemKind::RSTP : ProblemKind::PCSPG;
    for (const auto& [v, p] : prize_lines) data.prizes[v] = p;
  }
  try {
    return Instance(std::move(data));
  } catch (const StructuralError& e) {
    throw ParseError(line_no, e.what());
  }
}

Instance parse_stp_string(const std::string& text) {
  std::istringstream in(text);
  return parse_stp(in);
}

Instance read_stp_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_stp(in);
}

std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

std::string format_fixed6(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 6);
  return std::string(buf.data(), p);
}

void write_stp(std::ostream& out, const Instance& inst) {
  const auto& d = inst.data();
  bool symmetric = std::all_of(d.edges.begin(), d.edges.end(),
                               [](const EdgeSpec& e) { return e.weight_uv == e.weight_vu; });
  out << "33D32945 STP File, STP Format Version 1.0\n\n";
  out << "SECTION Comment\n";
  out << "Name \"" << inst.name() << "\"\n";
  out << "END\n\n";
  out << "SECTION Graph\n";
  out << "Nodes " << inst.num_vertices() << "\n";
  auto ext = [&](Vertex v) { return v + 1; };
  // endpoints are written smaller id first, the order parse_stp canonicalizes to
  if (symmetric) {
    out << "Edges " << d.edges.size() << "\n";
    for (const auto& e : d.edges)
      out << "E " << ext(std::min(e.u, e.v)) << ' ' << ext(std::max(e.u, e.v)) << ' ' << format_real(e.weight_uv) << "\n";
  } else {
    out << "Arcs " << 2 * d.edges.size() << "\n";
    for (const auto& e : d.edges) {
      const Vertex lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
      const double w_lo_hi = e.u == lo ? e.weight_uv : e.weight_vu;  // slot lo -> hi
      const double w_hi_lo = e.u == lo ? e.weight_vu : e.weight_uv;
      // arc a -> b prices the slot b -> a
      out << "A " << ext(lo) << ' ' << ext(hi) << ' ' << format_real(w_hi_lo) << "\n";
      out << "A " << ext(hi) << ' ' << ext(lo) << ' ' << format_real(w_lo_hi) << "\n";
    }
  }
  out << "END\n\n";
  out << "SECTION Terminals\n";
  if (inst.root()) out << "Root " << ext(*inst.root()) << "\n";
  if (inst.kind() == ProblemKind::SPG) {
    const auto terms = inst.terminals();
    out << "Terminals " << terms.size() << "\n";
    for (Vertex v : terms) out << "T " << ext(v) << "\n";
  } else {
    std::vector<Vertex> with_prize;
    for (Vertex v = 0; v < inst.num_vertices(); ++v)
      if (d.prizes[v] > 0.0) with_prize.push_back(v);
    out << "Terminals " << with_prize.size() << "\n";
    for (Vertex v : with_prize) out << "TP " << ext(v) << ' ' << format_real(d.prizes[v]) << "\n";
  }
  out << "END\n\nEOF\n";
}

std::string to_stp_string(const Instance& inst) {
  std::ostringstream out;
  write_stp(out, inst);
  return out.str();
}

void write_solution(std::ostream& out, const Instance& inst, const SolutionTree& tree) {
  out << "VALUE " << format_fixed6(energy(inst, tree)) << "\n";
  for (const auto& [child, parent] : tree.edges())
    out << "EDGE " << inst.external_id(child) << ' ' << inst.external_id(parent) << "\n";
}

}  // namespace msteiner
