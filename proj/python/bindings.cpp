#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "msteiner/driver.hpp"
#include "msteiner/errors.hpp"
#include "msteiner/generators.hpp"
#include "msteiner/oracle.hpp"
#include "msteiner/stp.hpp"
#include "msteiner/tree.hpp"

namespace py = pybind11;
using namespace msteiner;

namespace {

SolutionTree make_tree(Vertex root, const std::vector<Vertex>& parent, const std::vector<bool>& member) {
  if (parent.size() != member.size()) throw StructuralError("parent and member lengths differ");
  SolutionTree t;
  t.root = root;
  t.parent = parent;
  t.member.assign(member.begin(), member.end());
  return t;
}

std::vector<bool> members_of(const SolutionTree& t) { return {t.member.begin(), t.member.end()}; }

generators::PrizeRange prize_range(const std::optional<std::pair<double, double>>& p) { return p; }

}  // namespace

PYBIND11_MODULE(msteiner, m) {
  m.doc() = "Reinforced max-sum solver for rooted, prize-collecting and classic Steiner tree problems";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<BoundError>(m, "BoundError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::enum_<ProblemKind>(m, "ProblemKind")
      .value("SPG", ProblemKind::SPG)
      .value("PCSPG", ProblemKind::PCSPG)
      .value("RSTP", ProblemKind::RSTP);

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("num_vertices", &Instance::num_vertices)
      .def_property_readonly("num_edges", &Instance::num_edges)
      .def_property_readonly("kind", &Instance::kind)
      .def_property_readonly("root", &Instance::root)
      .def_property_readonly("name", &Instance::name)
      .def_property_readonly("prizes", [](const Instance& i) { return std::vector<double>(i.prizes().begin(), i.prizes().end()); })
      .def_property_readonly("terminals", &Instance::terminals)
      .def("edges",
           [](const Instance& i) {
             std::vector<std::tuple<Vertex, Vertex, double, double>> out;
             for (const auto& e : i.edges()) out.emplace_back(e.u, e.v, e.weight_uv, e.weight_vu);
             return out;
           },
           "(u, v, weight u->v, weight v->u) per edge, 0-based vertex ids")
      .def("with_root", &Instance::with_root, py::arg("root"))
      .def("to_stp", [](const Instance& i) { return to_stp_string(i); })
      .def("__repr__", [](const Instance& i) {
        return "<msteiner.Instance " + to_string(i.kind()) + " |V|=" + std::to_string(i.num_vertices()) +
               " |E|=" + std::to_string(i.num_edges()) + ">";
      });

  py::class_<SolutionTree>(m, "Tree")
      .def(py::init(&make_tree), py::arg("root"), py::arg("parent"), py::arg("member"))
      .def_readonly("root", &SolutionTree::root)
      .def_readonly("parent", &SolutionTree::parent)
      .def_property_readonly("member", &members_of)
      .def("size", &SolutionTree::size)
      .def("edges", &SolutionTree::edges, "(child, parent) pairs sorted by child")
      .def("__eq__", [](const SolutionTree& a, const SolutionTree& b) { return a == b; });

  m.def("parse_stp", &parse_stp_string, py::arg("text"), "Parse SteinLib .stp text");
  m.def("read_stp", &read_stp_file, py::arg("path"), "Read a SteinLib .stp file");
  m.def("energy", &energy, py::arg("instance"), py::arg("tree"),
        "Member edge weights toward the root plus prizes of excluded vertices");
  m.def("is_feasible", &is_feasible, py::arg("instance"), py::arg("tree"));
  m.def("gap", &gap, py::arg("x"), py::arg("y"), "Percentage gap (x - y) / y * 100");
  m.def("solution_text", [](const Instance& inst, const SolutionTree& t) {
    std::ostringstream out;
    write_solution(out, inst, t);
    return out.str();
  }, py::arg("instance"), py::arg("tree"));

  m.def("brute_force_optimum",
        [](const Instance& inst) {
          auto opt = oracle::brute_force_optimum(inst);
          return py::make_tuple(opt.tree, opt.cost);
        },
        py::arg("instance"), "Exact optimum of a small rooted instance: (tree, cost)");

  py::class_<driver::TraceRecord>(m, "TraceRecord")
      .def_readonly("time_s", &driver::TraceRecord::time_s)
      .def_readonly("iter", &driver::TraceRecord::iter)
      .def_readonly("label", &driver::TraceRecord::label)
      .def_readonly("energy", &driver::TraceRecord::energy)
      .def_readonly("feasible", &driver::TraceRecord::feasible)
      .def_readonly("depth", &driver::TraceRecord::depth)
      .def_readonly("gamma1", &driver::TraceRecord::gamma1);

  py::class_<driver::RunResult>(m, "SolveResult")
      .def_readonly("tree", &driver::RunResult::best)
      .def_readonly("energy", &driver::RunResult::energy)
      .def_readonly("feasible", &driver::RunResult::feasible)
      .def_readonly("root", &driver::RunResult::root)
      .def_readonly("trace", &driver::RunResult::trace)
      .def_readonly("iterations", &driver::RunResult::iterations)
      .def_readonly("converged", &driver::RunResult::converged)
      .def_readonly("decisional_energy", &driver::RunResult::decisional_energy);

  m.def(
      "solve",
      [](const Instance& inst, const std::string& variant, const std::string& scheme, double time_limit,
         std::uint64_t seed, std::optional<std::int32_t> depth, std::optional<double> gamma1,
         std::optional<Vertex> root) {
        driver::SolverConfig c;
        c.variant = variant;
        if (scheme == "increasing") c.scheme = driver::Scheme::Increasing;
        else if (scheme == "bounded") c.scheme = driver::Scheme::Bounded;
        else throw ConfigError("unknown scheme '" + scheme + "'");
        c.time_limit = time_limit;
        c.seed = seed;
        c.depth = depth;
        c.root = root;
        if (gamma1) {
          c.gamma1_start = *gamma1;
          c.gamma1_min = std::min(c.gamma1_min, *gamma1);
        }
        py::gil_scoped_release release;
        return driver::run(inst, c);
      },
      py::arg("instance"), py::arg("variant") = "O", py::arg("scheme") = "increasing", py::arg("time_limit") = 10.0,
      py::arg("seed") = 1, py::arg("depth") = py::none(), py::arg("gamma1") = py::none(), py::arg("root") = py::none());

  m.def(
      "generate_grid",
      [](std::int32_t nx, std::int32_t ny, std::int32_t nz, std::int32_t terminals,
         std::optional<std::pair<double, double>> prizes, std::uint64_t seed) {
        return generators::grid(nx, ny, nz, terminals, prize_range(prizes), seed);
      },
      py::arg("nx"), py::arg("ny"), py::arg("nz") = 1, py::arg("terminals") = 0, py::arg("prizes") = py::none(),
      py::arg("seed") = 1);
  m.def(
      "generate_scale_free",
      [](std::int32_t n, std::int32_t mm, std::int32_t terminals, std::optional<std::pair<double, double>> prizes,
         std::uint64_t seed) { return generators::scale_free(n, mm, terminals, prize_range(prizes), seed); },
      py::arg("n"), py::arg("m"), py::arg("terminals") = 0, py::arg("prizes") = py::none(), py::arg("seed") = 1);
}
