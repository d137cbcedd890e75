#include "lovelock/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "lovelock/gravity.hpp"

namespace lovelock {

namespace {

using nlohmann::json;

// Non-finite deviations cannot be stored as JSON numbers.
json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

json matrix(const Eigen::MatrixXd& a) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json report_to_json(const SuiteReport& rep, bool include_timing) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json j{{"name", c.name},
               {"status", to_string(c.status)},
               {"max_deviation", number(c.max_deviation)},
               {"tolerance", c.tolerance},
               {"samples", c.samples}};
        if (include_timing) j["elapsed_ms"] = c.elapsed_ms;
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(std::move(j));
    }
    json constants = json::array();
    for (const auto& k : rep.constants)
        constants.push_back({{"name", k.name},
                             {"m", k.m},
                             {"r", k.r},
                             {"value", number(k.value)},
                             {"variance", number(k.variance)},
                             {"samples", k.samples}});
    json env{{"seed", rep.seed}, {"dims", rep.dims}, {"r_values", rep.rs}};
    if (rep.samples > 0) env["samples"] = rep.samples;
    return {{"suite", rep.suite},
            {"passed", rep.passed()},
            {"environment", env},
            {"checks", checks},
            {"fitted_constants", constants}};
}

std::string report_summary(const SuiteReport& rep) {
    std::ostringstream os;
    int pass = 0, fail = 0, skip = 0;
    for (const auto& c : rep.checks) {
        char line[256];
        std::snprintf(line, sizeof line, "%-7s %-48s dev=%-10.3e tol=%-8.1e %8.1f ms\n", to_string(c.status),
                      c.name.c_str(), c.max_deviation, c.tolerance, c.elapsed_ms);
        os << line;
        if (c.status == CheckStatus::Pass) ++pass;
        else if (c.status == CheckStatus::Fail) ++fail;
        else ++skip;
    }
    os << rep.suite << ": " << pass << " passed, " << fail << " failed, " << skip << " skipped\n";
    return os.str();
}

json evaluate(const EvalRequest& req) {
    const auto source = resolve_metric(req.metric, req.params);
    const int m = source->dim();
    const std::vector<double> x = req.point ? *req.point : source->default_point();
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument("point needs " + std::to_string(m) + " coordinates, got " + std::to_string(x.size()));
    if (req.r < 1) throw std::invalid_argument("--r must be at least 1");

    json out{{"command", "eval"}, {"what", req.what}, {"metric", source->name()}, {"dim", m}, {"r", req.r}, {"point", x}};
    if (req.what == "divergence") {
        const auto d = divergence_lovelock(req.r, *source, x, req.step);
        out["step"] = req.step;
        out["residual"] = d.residual;
        out["residual_half_step"] = d.residual_half;
        out["max_residual"] = d.max_residual;
        out["max_residual_half_step"] = d.max_residual_half;
        out["convergence_ratio"] = d.ratio ? json(*d.ratio) : json(nullptr);
        return out;
    }

    const MetricSample ms = source->sample(x);
    const CurvatureData cd = curvature(ms);
    if (req.what == "density") {
        out["density"] = lovelock_density_fast(req.r, ms, cd);
        out["sqrt_abs_det_g"] = std::sqrt(std::abs(ms.det_g));
        out["scalar_curvature"] = cd.scalar;
        return out;
    }
    if (req.what == "tensor") {
        const Eigen::MatrixXd a = lovelock_tensor_fast(req.r, ms, cd);
        out["tensor"] = matrix(a);
        out["max_abs"] = a.cwiseAbs().maxCoeff();
        return out;
    }

    const Vielbein vb = vielbein_from_metric(ms.g, source->signature());
    if (req.what == "psi") {
        if (2 * req.r > m) throw std::invalid_argument("psi needs 2r <= dim");
        const auto psi = psi_form_base(req.r, vb, cd);
        const auto alt = psi_form_alternative(req.r, vb, cd);
        json norms = json::array();
        double alt_dev = 0.0, largest = 0.0;
        for (int i = 0; i < m; ++i) {
            json row = json::array();
            for (int j = 0; j < m; ++j) {
                const auto k = static_cast<std::size_t>(i * m + j);
                row.push_back(psi[k].max_abs());
                largest = std::max(largest, psi[k].max_abs());
                alt_dev = std::max(alt_dev, (psi[k] - alt[k]).max_abs());
            }
            norms.push_back(std::move(row));
        }
        const Eigen::MatrixXd contracted = psi_contracted(psi, vb);
        const Eigen::MatrixXd a = lovelock_tensor_fast(req.r, ms, cd);
        const double c = -vb.det / (2.0 * req.r);
        out["psi_norms"] = norms;
        out["max_norm"] = largest;
        out["contracted"] = matrix(contracted);
        out["lemma_residual"] = (contracted - c * a).cwiseAbs().maxCoeff();
        out["alternative_deviation"] = alt_dev;
        return out;
    }
    if (req.what == "eds") {
        json table = json::array();
        bool ok = true;
        for (const auto& e : eds_residuals(req.r, vb, cd, ms)) {
            json row{{"name", e.name}, {"structural", e.structural}};
            if (!e.structural) {
                row["residual"] = number(e.residual);
                row["tolerance"] = e.tolerance;
                row["within_tolerance"] = e.residual <= e.tolerance;
                ok = ok && e.residual <= e.tolerance;
            } else {
                row["note"] = "momenta vanish; no base residual";
            }
            table.push_back(std::move(row));
        }
        out["residuals"] = table;
        out["all_within_tolerance"] = ok;
        return out;
    }
    throw std::invalid_argument("unknown eval target '" + req.what + "'");
}

}  // namespace lovelock
