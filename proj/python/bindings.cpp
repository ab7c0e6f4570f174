#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "twospaces/abelian.hpp"
#include "twospaces/duality.hpp"
#include "twospaces/genericity.hpp"
#include "twospaces/marked.hpp"
#include "twospaces/oracles.hpp"
#include "twospaces/transfer.hpp"
#include "twospaces/words.hpp"

namespace py = pybind11;
using namespace twospaces;

namespace {

using Rows = std::vector<std::vector<py::int_>>;

Integer to_integer(const py::int_& x) {
  const std::string digits = py::str(static_cast<py::handle>(x));
  return Integer(digits);
}

py::int_ to_py(const Integer& x) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

Matrix to_matrix(const Rows& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ParseError("ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = to_integer(rows[i][j]);
  }
  return m;
}

Matrix to_matrix(const Rows& rows) {
  if (rows.empty()) throw ParseError("empty matrix; pass the ambient dimension");
  return to_matrix(rows, rows[0].size());
}

Rows from_matrix(const Matrix& m) {
  Rows out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i].push_back(to_py(m(i, j)));
  return out;
}

py::tuple invariants(const FGAbelianInvariants& inv) {
  py::list torsion;
  for (const auto& d : inv.torsion) torsion.append(to_py(d));
  return py::make_tuple(inv.rank, py::tuple(torsion));
}

std::vector<Word> parse_words(const std::vector<std::string>& ws) {
  std::vector<Word> out;
  for (const auto& w : ws) out.push_back(Word::parse(w));
  return out;
}

std::vector<std::string> word_strings(const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.str());
  return out;
}

py::object tri(Tri t) {
  if (t == Tri::Unknown) return py::none();
  return py::bool_(t == Tri::True);
}

}  // namespace

PYBIND11_MODULE(_twospaces, m) {
  m.doc() = "Marked groups, group operations on the naturals, and the maps between them";

  auto error = py::register_exception<Error>(m, "TwospacesError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", error);
  py::register_exception<CertificateFailed>(m, "CertificateFailed", error);
  py::register_exception<NotNested>(m, "NotNested", error);
  py::register_exception<IllegalFinite>(m, "IllegalFinite", error);

  m.attr("DEFAULT_PROBE_BUDGET") = kDefaultProbeBudget;
  m.attr("DEFAULT_SCAN_BUDGET") = kDefaultScanBudget;

  // words
  m.def("reduce", [](const std::string& w) { return Word::parse(w).str(); }, py::arg("word"));
  m.def("multiply", [](const std::string& u, const std::string& v) { return (Word::parse(u) * Word::parse(v)).str(); });
  m.def("inverse", [](const std::string& u) { return inv(Word::parse(u)).str(); });
  m.def(
      "enumerate_word",
      [](const py::int_& k, std::optional<Index> bound) { return enumerate(to_integer(k), bound).str(); },
      py::arg("k"), py::arg("bound") = py::none());
  m.def(
      "index_of",
      [](const std::string& w, std::optional<Index> bound) { return to_py(index_of(Word::parse(w), bound)); },
      py::arg("word"), py::arg("bound") = py::none());

  // oracles
  py::class_<GroupOracle>(m, "GroupOracle")
      .def_property_readonly("name", &GroupOracle::name)
      .def("mul", &GroupOracle::mul)
      .def("identity", [](const GroupOracle& g, std::uint64_t budget) { return g.identity(budget); },
           py::arg("budget") = kDefaultScanBudget)
      .def("inverse", [](const GroupOracle& g, Code a, std::uint64_t budget) { return g.inverse(a, budget); },
           py::arg("a"), py::arg("budget") = kDefaultScanBudget)
      .def("window", [](const GroupOracle& g, Code b) { return cayley_window(g, b); }, py::arg("b"))
      .def(
          "check_axioms",
          [](const GroupOracle& g, Code b, std::uint64_t budget) {
            const AxiomReport r = check_axioms_window(g, b, budget);
            return py::make_tuple(r.ok, r.failure, r.witness);
          },
          py::arg("b"), py::arg("budget") = kDefaultScanBudget)
      .def("__repr__", [](const GroupOracle& g) { return "<GroupOracle " + g.name() + ">"; });
  m.def("named", [](const std::string& expr) { return named(expr); }, py::arg("expr"));

  // marked groups and the transfer maps
  py::class_<MarkedGroup>(m, "MarkedGroup")
      .def("contains", [](const MarkedGroup& n, const std::string& w) { return n.contains(Word::parse(w)); })
      .def("image", [](const MarkedGroup& n, const std::string& w) { return n.image(Word::parse(w)); })
      .def("generator_image", &MarkedGroup::generator_image)
      .def_property_readonly("oracle", &MarkedGroup::oracle)
      .def_property_readonly("provenance", &MarkedGroup::provenance)
      .def("__repr__", [](const MarkedGroup& n) { return "<MarkedGroup " + n.provenance() + ">"; });
  m.def(
      "kernel_of_marking",
      [](const GroupOracle& g, const std::string& assign) { return kernel_of_marking(g, Assignment::parse(assign)); },
      py::arg("group"), py::arg("assignment"));
  m.def("sigma", &sigma);
  m.def("sigma_kernel", &sigma_kernel);
  m.def("phi", &phi);
  m.def("unique_generator_check", &unique_generator_check, py::arg("n"), py::arg("window"));
  m.def(
      "dm_check",
      [](const MarkedGroup& n, std::uint64_t mm, std::uint64_t budget) { return tri(dm_check(n, mm, budget)); },
      py::arg("n"), py::arg("m"), py::arg("budget") = kDefaultProbeBudget,
      "True, False, or None when the budget runs out.");
  m.def("f_map", &f_map, py::arg("n"), py::arg("budget") = kDefaultProbeBudget);

  // lattices
  m.def("hnf", [](const Rows& rows) { return from_matrix(hnf(to_matrix(rows)).basis()); });
  m.def("snf", [](const Rows& rows) {
    std::vector<py::int_> d;
    for (const auto& x : snf(to_matrix(rows))) d.push_back(to_py(x));
    return d;
  });
  m.def(
      "quotient_invariants",
      [](const Rows& rows, std::optional<std::size_t> ambient) {
        if (rows.empty()) return invariants(quotient_invariants(Lattice::zero(ambient.value_or(0))));
        const Lattice l = hnf(to_matrix(rows, ambient.value_or(rows[0].size())));
        return invariants(quotient_invariants(l));
      },
      py::arg("rows"), py::arg("ambient") = py::none(), "(rank, torsion) of Z^n / row span.");
  m.def("lattice_contains", [](const Rows& rows, const std::vector<py::int_>& v) {
    Vector x;
    for (const auto& c : v) x.push_back(to_integer(c));
    return hnf(to_matrix(rows)).contains(x);
  });

  // tori
  m.def("annihilator",
        [](const std::string& torus) { return from_matrix(annihilator(TorusSubgroup::parse(torus)).basis()); });
  m.def(
      "annihilated_subgroup",
      [](const Rows& rows, std::size_t ambient) {
        return annihilated_subgroup(rows.empty() ? Lattice::zero(ambient) : hnf(to_matrix(rows, ambient))).str();
      },
      py::arg("rows"), py::arg("ambient"));
  m.def("dual_invariants",
        [](const std::string& torus) { return invariants(dual_invariants(TorusSubgroup::parse(torus))); });
  m.def("prufer_tower_check", [](const py::int_& p, std::uint64_t k) { return prufer_tower_check(to_integer(p), k); });
  m.def("solenoid_tower_check", &solenoid_tower_check);

  // the game
  py::class_<CertifiedCondition>(m, "CertifiedCondition")
      .def_property_readonly("in_words", [](const CertifiedCondition& c) { return word_strings(c.in()); })
      .def_property_readonly("out_words", [](const CertifiedCondition& c) { return word_strings(c.out()); })
      .def_property_readonly("witness", &CertifiedCondition::witness)
      .def_property_readonly("support", &CertifiedCondition::support)
      .def("__str__", &CertifiedCondition::str);
  m.def(
      "certify",
      [](const std::vector<std::string>& in, const std::vector<std::string>& out, const MarkedGroup& witness) {
        return CertifiedCondition::make(parse_words(in), parse_words(out), witness);
      },
      py::arg("in_words"), py::arg("out_words"), py::arg("witness"));
  m.def("vacuous", &vacuous);
  m.def("density_step", &density_step, py::arg("cond"), py::arg("m"), py::arg("budget") = kDefaultProbeBudget);
  m.def(
      "adversary_move",
      [](const CertifiedCondition& c, const std::vector<std::string>& in, const std::vector<std::string>& out,
         std::optional<MarkedGroup> witness) { return adversary_move(c, parse_words(in), parse_words(out), witness); },
      py::arg("cond"), py::arg("in_words"), py::arg("out_words"), py::arg("witness") = py::none());
  m.def("nowhere_dense_phi_demo", &nowhere_dense_phi_demo, py::arg("cond"), py::arg("budget") = kDefaultProbeBudget);
  m.def(
      "play_strategy",
      [](const CertifiedCondition& initial, std::uint64_t rounds, std::uint64_t budget, std::uint64_t seed) {
        return play_strategy(initial, rounds, budget, seed).str();
      },
      py::arg("initial"), py::arg("rounds"), py::arg("budget") = kDefaultProbeBudget, py::arg("seed") = 0,
      "Transcript text, one line per move.");

  // command line
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& input) {
        std::istringstream in(input);
        std::ostringstream out, err;
        const int code = cli::dispatch(args, in, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "(exit code, stdout, stderr) of one twospaces invocation.");
}
