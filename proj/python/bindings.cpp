#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "diffgal/cli.hpp"
#include "diffgal/errors.hpp"
#include "diffgal/expr.hpp"
#include "diffgal/json_io.hpp"

namespace py = pybind11;
using namespace diffgal;

namespace {

std::string structure_group(const std::string& text) {
  auto s = structure_from_json(json::parse(text));
  auto v = validate(s);
  if (!v.ok) throw DomainError(v.message);
  check_formula_guard(s);
  auto d = derive(s);
  return autpairs_to_json(group_intdef1(s, d)).dump();
}

std::string structure_brute_group(const std::string& text, int max_size) {
  auto s = structure_from_json(json::parse(text));
  return autpairs_to_json(brute_force_group(s, max_size)).dump();
}

std::string random_structure_json(std::uint64_t seed, int maxQ, int maxD, int maxX) {
  std::mt19937_64 rng(seed);
  auto b = random_bounds(rng, maxQ, maxD, maxX);
  return structure_to_json(random_structure(rng(), b)).dump();
}

std::vector<std::vector<long>> lattice(const std::vector<std::string>& values) {
  std::vector<Rational> vals;
  for (const auto& v : values) {
    auto f = parse_expr(v, {});
    if (!f.is_constant()) throw DomainError("'" + v + "' is not a rational number");
    vals.push_back(f.num().constant_value() / f.den().constant_value());
  }
  std::vector<std::vector<long>> out;
  for (const auto& b : multiplicative_lattice(vals).vectors()) {
    std::vector<long> v;
    for (const auto& x : b) v.push_back(x.get_si());
    out.push_back(v);
  }
  return out;
}

std::string invariants(const std::string& system, unsigned d, unsigned k, unsigned m) {
  auto sys = system_from_json(json::parse(system));
  json out = json::array();
  for (const auto& inv : invariant_search(sys, {d, k, m}).invariants) out.push_back(invariant_to_json(inv));
  return out.dump();
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact difference Galois groups and finite internality structures";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);
  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);

  m.def("run", &run, py::arg("args"), "Run a CLI subcommand; returns (exit_code, stdout, stderr).");
  m.def("structure_group", &structure_group, py::arg("structure_json"),
        "Automorphism group of a structure as a JSON list of {Q, X} pairs.");
  m.def("structure_brute_group", &structure_brute_group, py::arg("structure_json"), py::arg("max_size") = 6);
  m.def("random_structure", &random_structure_json, py::arg("seed"), py::arg("max_q") = 4, py::arg("max_d") = 2,
        py::arg("max_x") = 5);
  m.def("multiplicative_lattice", &lattice, py::arg("values"),
        "Basis of the relation lattice of nonzero rationals given as strings.");
  m.def("invariants", &invariants, py::arg("system_json"), py::arg("d") = 4, py::arg("k") = 2, py::arg("m") = 4,
        "Invariant search on a system; JSON list of {p, k, h}.");
}
