#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "lovelock/alt.hpp"
#include "lovelock/checks.hpp"
#include "lovelock/gravity.hpp"
#include "lovelock/metrics.hpp"
#include "lovelock/report.hpp"
#include "lovelock/valg.hpp"

namespace py = pybind11;
using namespace lovelock;

namespace {

Signature signature_from(const std::vector<int>& diag) { return Signature(diag); }

struct Evaluated {
    MetricSample ms;
    CurvatureData cd;
};

Evaluated evaluate_metric(const std::string& metric, const MetricParams& params, const std::optional<std::vector<double>>& point) {
    const auto src = resolve_metric(metric, params);
    const auto x = point ? *point : src->default_point();
    auto ms = src->sample(x);
    auto cd = curvature(ms);
    return {std::move(ms), std::move(cd)};
}

}  // namespace

PYBIND11_MODULE(_lovelock, m) {
    m.doc() = "Lovelock gravity verification core";

    m.def("levi_civita", [](const std::vector<int>& seq) { return levi_civita(seq); }, py::arg("indices"));
    m.def("gkdelta", [](const std::vector<int>& up, const std::vector<int>& lo) { return gkdelta(up, lo); },
          py::arg("upper"), py::arg("lower"));
    m.def(
        "verify_eps_delta",
        [](int dim, int k) {
            const auto r = verify_eps_delta(dim, k);
            return py::dict(py::arg("passed") = r.pass, py::arg("max_abs_deviation") = r.max_abs_deviation,
                            py::arg("assignments") = r.assignments);
        },
        py::arg("dim"), py::arg("k"));
    m.def(
        "hodge_matrix", [](int k, const std::vector<int>& sig) { return hodge_matrix(k, signature_from(sig)); },
        py::arg("degree"), py::arg("signature"));

    m.def(
        "run_suite_json",
        [](const std::string& suite, int dim, int r, std::uint64_t seed, int samples, std::optional<double> tol, bool timing) {
            SuiteOptions o;
            o.dim = dim;
            o.r = r;
            o.seed = seed;
            o.samples = samples;
            o.tol = tol;
            SuiteReport rep;
            {
                py::gil_scoped_release release;
                rep = run_suite(suite, o);
            }
            return report_to_json(rep, timing).dump();
        },
        py::arg("suite"), py::arg("dim") = 0, py::arg("r") = 0, py::arg("seed") = 0, py::arg("samples") = 0,
        py::arg("tol") = py::none(), py::arg("timing") = true);

    m.def(
        "evaluate_json",
        [](const std::string& what, const std::string& metric, const MetricParams& params, int r,
           std::optional<std::vector<double>> point, double step) {
            EvalRequest q{what, metric, params, r, std::move(point), step};
            return evaluate(q).dump();
        },
        py::arg("what"), py::arg("metric"), py::arg("params") = MetricParams{}, py::arg("r") = 1,
        py::arg("point") = py::none(), py::arg("step") = 1e-3);

    m.def(
        "metric_at",
        [](const std::string& metric, const MetricParams& params, std::optional<std::vector<double>> point) {
            const auto e = evaluate_metric(metric, params, point);
            return py::dict(py::arg("g") = e.ms.g, py::arg("ricci") = e.cd.ricci, py::arg("scalar") = e.cd.scalar,
                            py::arg("det_g") = e.ms.det_g);
        },
        py::arg("metric"), py::arg("params") = MetricParams{}, py::arg("point") = py::none());
    m.def(
        "lovelock_density",
        [](const std::string& metric, int r, const MetricParams& params, std::optional<std::vector<double>> point) {
            const auto e = evaluate_metric(metric, params, point);
            return lovelock_density_fast(r, e.ms, e.cd);
        },
        py::arg("metric"), py::arg("r"), py::arg("params") = MetricParams{}, py::arg("point") = py::none());
    m.def(
        "lovelock_tensor",
        [](const std::string& metric, int r, const MetricParams& params, std::optional<std::vector<double>> point) {
            const auto e = evaluate_metric(metric, params, point);
            return lovelock_tensor_fast(r, e.ms, e.cd);
        },
        py::arg("metric"), py::arg("r"), py::arg("params") = MetricParams{}, py::arg("point") = py::none());
    m.def(
        "einstein_tensor",
        [](const std::string& metric, const MetricParams& params, std::optional<std::vector<double>> point) {
            const auto e = evaluate_metric(metric, params, point);
            return einstein_tensor(e.ms, e.cd);
        },
        py::arg("metric"), py::arg("params") = MetricParams{}, py::arg("point") = py::none());

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const std::invalid_argument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });
}
