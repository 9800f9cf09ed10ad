#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellopt/commands.hpp"
#include "bellopt/errors.hpp"
#include "bellopt/lhv_solver.hpp"
#include "bellopt/observable_search.hpp"
#include "bellopt/quantum_model.hpp"
#include "bellopt/records.hpp"

namespace py = pybind11;
using namespace bellopt;

namespace {

// Table entries as an array of shape (2, 2, N, N): [i, j, k, l].
py::array_t<double> table_array(const ProbabilityTable& t) {
  const auto n = static_cast<py::ssize_t>(t.dim());
  py::array_t<double> out({py::ssize_t{2}, py::ssize_t{2}, n, n});
  std::copy(t.entries().begin(), t.entries().end(), out.mutable_data());
  return out;
}

PhaseSettings phases_from(const std::vector<std::vector<double>>& a,
                          const std::vector<std::vector<double>>& b) {
  if (a.size() != 2 || b.size() != 2) {
    throw InvalidDimension("expected two phase vectors per observer");
  }
  return PhaseSettings({a[0], a[1]}, {b[0], b[1]});
}

AmoebaConfig amoeba(int restarts, std::uint64_t seed) {
  AmoebaConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Critical noise fractions for Bell experiments on two entangled quNits";

  py::register_exception<InvalidDimension>(m, "InvalidDimension", PyExc_ValueError);
  py::register_exception<IndexError>(m, "IndexError", PyExc_IndexError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SolverStall>(m, "SolverStall", PyExc_RuntimeError);
  py::register_exception<SearchAbort>(m, "SearchAbort", PyExc_RuntimeError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  py::class_<ProbabilityTable>(m, "ProbabilityTable")
      .def(py::init<int, std::vector<double>>(), py::arg("dim"), py::arg("entries"))
      .def_static("uniform", &ProbabilityTable::uniform, py::arg("dim"))
      .def_property_readonly("dim", &ProbabilityTable::dim)
      .def("__call__", &ProbabilityTable::at, py::arg("i"), py::arg("j"), py::arg("k"),
           py::arg("l"))
      .def("to_array", &table_array)
      .def("normalization_defect", &ProbabilityTable::normalization_defect)
      .def("marginal_defect", &ProbabilityTable::marginal_defect);

  py::class_<PhaseSettings>(m, "PhaseSettings")
      .def(py::init(&phases_from), py::arg("alice"), py::arg("bob"))
      .def_static("zeros", &PhaseSettings::zeros, py::arg("dim"))
      .def_property_readonly("dim", &PhaseSettings::dim)
      .def("alice", &PhaseSettings::alice, py::arg("setting"))
      .def("bob", &PhaseSettings::bob, py::arg("setting"))
      .def("gauge_fixed", &PhaseSettings::gauge_fixed)
      .def("flatten", &PhaseSettings::flatten);

  py::class_<SgDirections>(m, "SgDirections")
      .def(py::init([](std::array<std::array<double, 2>, 2> a,
                       std::array<std::array<double, 2>, 2> b) { return SgDirections{a, b}; }),
           py::arg("alice"), py::arg("bob"))
      .def_readwrite("alice", &SgDirections::alice)
      .def_readwrite("bob", &SgDirections::bob)
      .def("flatten", &SgDirections::flatten);

  m.def("bell_multiport", [](int dim) { return bell_multiport(dim).entries(); }, py::arg("dim"));
  m.def("probability_table_multiport", &probability_table_multiport, py::arg("settings"));
  m.def("joint_probability_multiport", &joint_probability_multiport, py::arg("settings"),
        py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"), py::arg("noise_fraction"));
  m.def(
      "unitary_from_params",
      [](int dim, std::vector<double> params) {
        return unitary_from_params({dim, std::move(params)}).entries();
      },
      py::arg("dim"), py::arg("params"));
  m.def(
      "probability_table_general",
      [](const Eigen::MatrixXcd& a1, const Eigen::MatrixXcd& a2, const Eigen::MatrixXcd& b1,
         const Eigen::MatrixXcd& b2) {
        return probability_table_general(UnitaryMatrix(a1), UnitaryMatrix(a2),
                                         UnitaryMatrix(b1), UnitaryMatrix(b2));
      },
      py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"));
  m.def("probability_table_sg_spin1", &probability_table_sg_spin1, py::arg("directions"));

  py::class_<LhvThreshold>(m, "LhvThreshold")
      .def_readonly("f_min", &LhvThreshold::f_min)
      .def_readonly("hidden", &LhvThreshold::hidden)
      .def_readonly("residual", &LhvThreshold::residual);

  m.def(
      "critical_noise_fraction",
      [](const ProbabilityTable& t) { return critical_noise_fraction(t); }, py::arg("table"));
  m.def("verify_lhv_model", &verify_lhv_model, py::arg("model"), py::arg("table"));
  m.def("chsh_oracle_threshold", &chsh_oracle_threshold, py::arg("table"));

  py::class_<ThresholdEngine>(m, "ThresholdEngine")
      .def(py::init<int>(), py::arg("dim"))
      .def_property_readonly("dim", &ThresholdEngine::dim)
      .def("threshold", &ThresholdEngine::threshold, py::arg("table"))
      .def("score", &ThresholdEngine::score, py::arg("table"))
      .def_property_readonly("solves", &ThresholdEngine::solves);

  py::class_<SearchResult>(m, "SearchResult")
      .def_property_readonly("family",
                             [](const SearchResult& r) { return to_string(family_of(r.best_settings)); })
      .def_property_readonly("dim",
                             [](const SearchResult& r) { return dimension_of(r.best_settings); })
      .def_property_readonly(
          "settings", [](const SearchResult& r) { return flatten_settings(r.best_settings); })
      .def_property_readonly(
          "table", [](const SearchResult& r) { return table_for(r.best_settings); })
      .def_readonly("best_f", &SearchResult::best_f)
      .def_readonly("evaluations", &SearchResult::evaluations)
      .def_readonly("lp_solves", &SearchResult::lp_solves)
      .def_readonly("restart_bests", &SearchResult::restart_bests)
      .def_readonly("seed", &SearchResult::seed)
      .def_readonly("certified_f", &SearchResult::certified_f)
      .def_readonly("certificate_residual", &SearchResult::certificate_residual);

  m.def(
      "optimize",
      [](const std::string& family, int dim, int restarts, std::uint64_t seed) {
        const AmoebaConfig cfg = amoeba(restarts, seed);
        py::gil_scoped_release release;
        return optimize(family_from_string(family), dim, cfg);
      },
      py::arg("family"), py::arg("dim"), py::arg("restarts") = 20, py::arg("seed") = 42);
  m.def(
      "table_for_settings",
      [](const std::string& family, int dim, std::vector<double> flat) {
        return table_for(unflatten_settings(family_from_string(family), dim, flat));
      },
      py::arg("family"), py::arg("dim"), py::arg("settings"));

  m.def("separability_bound", &separability_bound, py::arg("n"));

  py::class_<ResultRecord>(m, "ResultRecord")
      .def(py::init<>())
      .def_readwrite("n", &ResultRecord::n)
      .def_readwrite("model", &ResultRecord::model)
      .def_readwrite("f_max", &ResultRecord::f_max)
      .def_readwrite("separability_bound", &ResultRecord::separability_bound)
      .def_readwrite("evaluations", &ResultRecord::evaluations)
      .def_readwrite("lp_solves", &ResultRecord::lp_solves)
      .def_readwrite("wall_time_seconds", &ResultRecord::wall_time_seconds)
      .def_readwrite("seed", &ResultRecord::seed)
      .def_readwrite("settings", &ResultRecord::settings)
      .def("__eq__", [](const ResultRecord& a, const ResultRecord& b) { return a == b; });

  m.def("make_record", &make_record, py::arg("result"), py::arg("wall_time_seconds"));
  m.def("to_csv", &to_csv, py::arg("records"));
  m.def("to_json", &to_json, py::arg("records"));
  m.def("parse_records", [](const std::string& text) { return parse_records(text); },
        py::arg("text"));
  m.def(
      "verify_records",
      [](const std::vector<ResultRecord>& records) {
        const VerifyReport r = verify_records(records);
        return py::make_tuple(r.ok, r.lines);
      },
      py::arg("records"));
}
