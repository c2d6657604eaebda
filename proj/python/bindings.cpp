// Python bindings for the cutting-plane manifold classifier.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcp/baseline.hpp"
#include "mcp/driver.hpp"
#include "mcp/ensemble.hpp"
#include "mcp/harness.hpp"
#include "mcp/oracle.hpp"

namespace py = pybind11;
using namespace mcp;

namespace {

RunConfig make_config(double delta, std::optional<double> C, double qp_tolerance,
                      std::uint64_t seed, std::size_t max_iterations,
                      const std::string& selection) {
    RunConfig cfg;
    cfg.tolerance = delta;
    cfg.slack_coefficient = C;
    cfg.qp_tolerance = qp_tolerance;
    cfg.rng_seed = seed;
    cfg.max_iterations = max_iterations;
    if (selection == "worst") {
        cfg.oracle_selection = OracleSelection::Worst;
    } else if (selection != "first") {
        throw std::invalid_argument("oracle_selection must be 'first' or 'worst'");
    }
    return cfg;
}

std::vector<Manifold> to_manifolds(const std::vector<EllipsoidManifold>& ensemble) {
    return as_manifolds(ensemble);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "maximum-margin classification of parameterized manifolds via cutting planes";

    py::class_<EllipsoidManifold>(m, "EllipsoidManifold")
        .def(py::init<Vector, Matrix, Vector, double, int>(), py::arg("center"),
             py::arg("basis"), py::arg("radii"), py::arg("q"), py::arg("label"))
        .def_property_readonly("center", &EllipsoidManifold::center)
        .def_property_readonly("basis", &EllipsoidManifold::basis)
        .def_property_readonly("radii", &EllipsoidManifold::radii)
        .def_property_readonly("q", &EllipsoidManifold::q)
        .def_property_readonly("label", &EllipsoidManifold::label)
        .def("point_at", &EllipsoidManifold::point_at, py::arg("s"))
        .def("norm_bound", &EllipsoidManifold::norm_bound);

    py::class_<QpSolution>(m, "QpSolution")
        .def_readonly("weights", &QpSolution::weights)
        .def_readonly("slacks", &QpSolution::slacks)
        .def_readonly("objective", &QpSolution::objective)
        .def_readonly("kkt_residual", &QpSolution::kkt_residual);

    py::class_<RunTrace>(m, "RunTrace")
        .def_property_readonly("status",
                               [](const RunTrace& t) { return to_string(t.terminal_status); })
        .def_property_readonly("iterations",
                               [](const RunTrace& t) {
                                   py::list out;
                                   for (const auto& it : t.iterations) {
                                       out.append(py::make_tuple(it.objective, it.violation,
                                                                 it.working_set_size,
                                                                 it.added_manifold));
                                   }
                                   return out;
                               })
        .def("augmentations", &RunTrace::augmentations)
        .def("to_csv", &RunTrace::to_csv);

    m.def("generate_ensemble", &generate_ensemble, py::arg("ambient_dim"),
          py::arg("num_manifolds"), py::arg("intrinsic_dim"), py::arg("mean_radius"),
          py::arg("q"), py::arg("seed"));
    m.def("save_ensemble", &save_ensemble, py::arg("path"), py::arg("ensemble"));
    m.def("load_ensemble", &load_ensemble, py::arg("path"));
    m.def("ellipsoid_norm_bound",
          [](const EllipsoidManifold& e) { return e.norm_bound(); });
    m.def("ensemble_norm_bound", [](const std::vector<EllipsoidManifold>& ens) {
        return ensemble_norm_bound(to_manifolds(ens));
    });

    m.def(
        "run_simple",
        [](const std::vector<EllipsoidManifold>& ensemble, double delta, double qp_tolerance,
           std::uint64_t seed, std::size_t max_iterations, const std::string& selection) {
            const auto manifolds = to_manifolds(ensemble);
            const auto cfg = make_config(delta, std::nullopt, qp_tolerance, seed,
                                         max_iterations, selection);
            const auto initial =
                initial_working_set(manifolds, InitialSet::Centers, seed);
            auto result = run_simple(manifolds, initial, cfg);
            return py::make_tuple(result.solution, result.trace);
        },
        py::arg("ensemble"), py::arg("delta") = 1e-3, py::arg("qp_tolerance") = 1e-8,
        py::arg("seed") = 0, py::arg("max_iterations") = 0,
        py::arg("oracle_selection") = "first",
        "hard-margin cutting-plane run; returns (solution, trace)");

    m.def(
        "run_slack",
        [](const std::vector<EllipsoidManifold>& ensemble, double C, double delta,
           double qp_tolerance, std::uint64_t seed, std::size_t max_iterations,
           const std::string& selection) {
            const auto manifolds = to_manifolds(ensemble);
            const auto cfg =
                make_config(delta, C, qp_tolerance, seed, max_iterations, selection);
            std::vector<Vector> centers;
            for (const auto& mf : manifolds) centers.push_back(center_point(mf));
            const auto initial =
                initial_working_set(manifolds, InitialSet::Centers, seed);
            auto result = run_slack(manifolds, centers, initial, cfg);
            return py::make_tuple(result.solution, result.trace);
        },
        py::arg("ensemble"), py::arg("C"), py::arg("delta") = 1e-3,
        py::arg("qp_tolerance") = 1e-8, py::arg("seed") = 0, py::arg("max_iterations") = 0,
        py::arg("oracle_selection") = "first",
        "per-manifold-slack cutting-plane run; returns (solution, trace)");

    m.def(
        "ellipsoid_worst_point",
        [](const EllipsoidManifold& e, const Vector& w) {
            const auto wp = ellipsoid_worst_point(e, w);
            return py::make_tuple(wp.point, wp.params, wp.margin);
        },
        py::arg("manifold"), py::arg("w"),
        "closed-form minimizer of y<w,x> over the manifold; returns (point, s, margin)");

    m.def("sample_manifold", &sample_manifold, py::arg("manifold"), py::arg("count"),
          py::arg("seed"));
    m.def(
        "train_point_svm",
        [](const std::vector<Vector>& points, const std::vector<int>& labels,
           std::optional<double> C, double qp_tolerance) {
            return train_point_svm(points, labels, C, qp_tolerance);
        },
        py::arg("points"), py::arg("labels"), py::arg("C") = py::none(),
        py::arg("qp_tolerance") = 1e-8);
    m.def(
        "generalization_error",
        [](const Vector& w, const std::vector<EllipsoidManifold>& ensemble, int tests,
           std::uint64_t seed) {
            return generalization_error(w, to_manifolds(ensemble), tests, seed);
        },
        py::arg("w"), py::arg("ensemble"), py::arg("tests_per_manifold"), py::arg("seed"));

    m.def("bracket_hard", &bracket_hard, py::arg("solution"), py::arg("delta"));
    m.def("bracket_slack", &bracket_slack, py::arg("solution"), py::arg("num_manifolds"),
          py::arg("C"), py::arg("delta"));
    m.def("error_counter", &error_counter, py::arg("trace"));

    m.def(
        "audit_solution",
        [](const QpSolution& sol, const std::vector<EllipsoidManifold>& ensemble,
           double delta, int samples, std::uint64_t seed) {
            const auto report =
                audit_solution(sol, to_manifolds(ensemble), delta, samples, seed);
            py::dict out;
            out["violations"] = report.violation_count;
            out["worst_margin"] = report.worst_margin;
            out["max_oracle_gap"] = report.max_oracle_gap;
            out["degenerate_weights"] = report.degenerate_weights;
            return out;
        },
        py::arg("solution"), py::arg("ensemble"), py::arg("delta"),
        py::arg("samples_per_manifold") = 100000, py::arg("seed") = 202406);

    m.def(
        "run_experiment_csv",
        [](const std::string& config_json) {
            const auto cfg = ExperimentConfig::from_json(config_json);
            const auto result = run_experiment(cfg);
            return results_to_csv(cfg, result.rows);
        },
        py::arg("config_json"),
        "run a full experiment from a JSON config string; returns the results CSV");

    m.attr("__version__") = "0.1.0";
}
