#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>
#include <vector>

#include "lovelock/checks.hpp"
#include "lovelock/gravity.hpp"
#include "lovelock/metrics.hpp"
#include "lovelock/valg.hpp"
#include "util.hpp"

namespace lovelock {

namespace {

// The reference loop visits m^(4r+2) index pairs.
bool reference_affordable(int m, int r) { return std::pow(m, 4 * r + 2) <= 1e8; }

struct Evaluated {
    MetricSample ms;
    CurvatureData cd;
};

Evaluated evaluate_at(const MetricSource& src, std::span<const double> x) {
    Evaluated e{src.sample(x), {}};
    e.cd = curvature(e.ms);
    return e;
}

Evaluated random_evaluated(int m, const Signature& eta, std::mt19937_64& rng) {
    const auto d = detail::random_metric(m, eta, rng);
    return evaluate_at(*d.source, d.x);
}

double max_abs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

// Least-squares c with a ~ c b.
double fit(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a.array() * b.array()).sum() / b.squaredNorm(); }

// Ricci by contracting the lower-index Riemann tensor directly.
Eigen::MatrixXd ricci_oracle(const CurvatureData& cd) {
    const int m = cd.m;
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(m, m);
    for (int rho = 0; rho < m; ++rho)
        for (int nu = 0; nu < m; ++nu)
            for (int s = 0; s < m; ++s) ric(rho, nu) += cd.riemann(s, rho, s, nu);
    return ric;
}

}  // namespace

CheckOutcome check_metricity(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto d = detail::random_metric(m, Signature::lorentzian(m), rng);
        const auto ms = d.source->sample(d.x);
        const auto conn = christoffel(ms);
        for (int rho = 0; rho < m; ++rho)
            for (int mu = 0; mu < m; ++mu)
                for (int nu = 0; nu < m; ++nu) {
                    double v = ms.dg(rho, mu, nu);
                    for (int l = 0; l < m; ++l) v -= conn.gamma(l, rho, mu) * ms.g(l, nu) + conn.gamma(l, rho, nu) * ms.g(mu, l);
                    out.max_deviation = std::max(out.max_deviation, std::abs(v));
                    out.max_deviation = std::max(out.max_deviation, std::abs(conn.gamma(rho, mu, nu) - conn.gamma(rho, nu, mu)));
                }
        ++out.samples;
    }
    return out;
}

CheckOutcome check_sphere_curvature() {
    CheckOutcome out;
    for (double a : {1.0, 2.0, 0.5}) {
        const auto src = make_builtin_metric("sphere", {{"a", std::to_string(a)}});
        const std::vector<double> x{1.0, 0.5};
        const auto e = evaluate_at(*src, x);
        const double expect_gamma = -std::sin(x[0]) * std::cos(x[0]);
        out.max_deviation = std::max(out.max_deviation, std::abs(e.cd.scalar - 2.0 / (a * a)));
        out.max_deviation = std::max(out.max_deviation, std::abs(e.cd.conn.gamma(0, 1, 1) - expect_gamma));
        ++out.samples;
    }
    return out;
}

CheckOutcome check_schwarzschild_ricci() {
    CheckOutcome out;
    for (double M : {1.0, 0.5}) {
        const auto src = make_builtin_metric("schwarzschild", {{"M", std::to_string(M)}});
        const auto e = evaluate_at(*src, src->default_point());
        out.max_deviation = std::max({out.max_deviation, max_abs(ricci_oracle(e.cd)), max_abs(e.cd.ricci)});
        ++out.samples;
    }
    return out;
}

CheckOutcome check_density_fit(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    std::vector<double> cs;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, Signature::lorentzian(m), rng);
        cs.push_back(lovelock_density(1, e.ms, e.cd) / (std::sqrt(std::abs(e.ms.det_g)) * e.cd.scalar));
    }
    out.samples = samples;
    out.max_deviation = detail::relative_spread(cs);
    out.constants.push_back(detail::summarize_constant("density_over_sqrtg_scalar", m, 1, cs));
    return out;
}

CheckOutcome check_gauss_bonnet_product() {
    const auto src = make_builtin_metric("sphere-product", {{"a", "1.0"}, {"b", "2.0"}});
    const auto e = evaluate_at(*src, src->default_point());
    const int m = 4;
    // eps^{mu nu rho sigma} eps_{a b c d} R^{ab}_{mu nu} R^{cd}_{rho sigma}
    double oracle = 0.0;
    for_each_tuple(m, 4, [&](const IndexTuple& up) {
        const int eu = levi_civita(up);
        if (!eu) return;
        for_each_tuple(m, 4, [&](const IndexTuple& low) {
            const int el = levi_civita(low);
            if (!el) return;
            oracle += eu * el * e.cd.raised(low[0], low[1], up[0], up[1]) * e.cd.raised(low[2], low[3], up[2], up[3]);
        });
    });
    oracle *= std::sqrt(std::abs(e.ms.det_g));
    const double got = lovelock_density(2, e.ms, e.cd);
    CheckOutcome out;
    out.samples = 1;
    out.max_deviation = std::abs(got - oracle) / std::max(std::abs(oracle), 1e-300);
    out.detail = "density " + detail::sci(got) + ", oracle " + detail::sci(oracle);
    return out;
}

CheckOutcome check_fast_paths(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    int compared = 0;
    for (int rr = 1; rr <= r && reference_affordable(m, rr); ++rr) compared = rr;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, Signature::lorentzian(m), rng);
        for (int rr = 1; rr <= compared; ++rr) {
            out.max_deviation = std::max(out.max_deviation, std::abs(lovelock_density(rr, e.ms, e.cd) - lovelock_density_fast(rr, e.ms, e.cd)));
            out.max_deviation = std::max(out.max_deviation, max_abs(lovelock_tensor(rr, e.ms, e.cd) - lovelock_tensor_fast(rr, e.ms, e.cd)));
        }
        ++out.samples;
    }
    if (compared < r) out.detail = "orders above " + std::to_string(compared) + " too costly for the reference loop";
    return out;
}

CheckOutcome check_tensor_symmetry(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, Signature::lorentzian(m), rng);
        const auto A = reference_affordable(m, r) ? lovelock_tensor(r, e.ms, e.cd) : lovelock_tensor_fast(r, e.ms, e.cd);
        out.max_deviation = std::max(out.max_deviation, max_abs(A - A.transpose()));
        ++out.samples;
    }
    if (!reference_affordable(m, r)) out.detail = "pruned loop";
    return out;
}

CheckOutcome check_tensor_vanishing(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int r = (m + 1) / 2;  // smallest r with 2r + 1 > m
    const bool naive = reference_affordable(m, r);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, Signature::lorentzian(m), rng);
        out.max_deviation = std::max(out.max_deviation, max_abs(naive ? lovelock_tensor(r, e.ms, e.cd) : lovelock_tensor_fast(r, e.ms, e.cd)));
        ++out.samples;
    }
    out.detail = "r = " + std::to_string(r) + (naive ? ", reference loop" : ", pruned loop");
    return out;
}

CheckOutcome check_einstein_fit(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    std::vector<double> cs;
    double resid = 0.0;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, Signature::lorentzian(m), rng);
        const Eigen::MatrixXd A = lovelock_tensor(1, e.ms, e.cd);
        // Einstein tensor from Ricci and the scalar, raised with the inverse metric.
        const Eigen::MatrixXd ric = ricci_oracle(e.cd);
        const double R = (e.ms.ginv * ric).trace();
        const Eigen::MatrixXd G = e.ms.ginv * (ric - 0.5 * R * e.ms.g) * e.ms.ginv;
        const double c = fit(A, G);
        cs.push_back(c);
        resid = std::max(resid, max_abs(A - c * G) / max_abs(A));
    }
    out.samples = samples;
    const double spread = detail::relative_spread(cs);
    out.max_deviation = std::max(spread, resid);
    out.constants.push_back(detail::summarize_constant("tensor_over_einstein", m, 1, cs));
    out.detail = "relative spread " + detail::sci(spread) + ", fit residual " + detail::sci(resid);
    return out;
}

CheckOutcome check_schwarzschild_tensor() {
    CheckOutcome out;
    for (double M : {1.0, 0.5}) {
        const auto src = make_builtin_metric("schwarzschild", {{"M", std::to_string(M)}});
        const auto e = evaluate_at(*src, src->default_point());
        out.max_deviation = std::max(out.max_deviation, max_abs(lovelock_tensor(1, e.ms, e.cd)));
        ++out.samples;
    }
    return out;
}

std::vector<CheckOutcome> check_divergence(int m, int r, int samples, double h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckOutcome> out(2);
    double lo = 1e300, hi = -1e300;
    for (int n = 0; n < samples; ++n) {
        const auto d = detail::random_metric(m, Signature::lorentzian(m), rng);
        const auto res = divergence_lovelock(r, *d.source, d.x, h);
        out[0].max_deviation = std::max(out[0].max_deviation, res.max_residual);
        if (res.ratio) {
            lo = std::min(lo, *res.ratio);
            hi = std::max(hi, *res.ratio);
            out[1].max_deviation = std::max(out[1].max_deviation, std::abs(*res.ratio - 4.0));
        }
        ++out[0].samples;
        ++out[1].samples;
    }
    if (lo <= hi) out[1].detail = "ratio in [" + detail::sci(lo) + ", " + detail::sci(hi) + "]";
    else out[1].skipped = true;  // residual below rounding at both steps
    return out;
}

CheckOutcome check_psi_lemma(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Signature eta = Signature::lorentzian(m);
    CheckOutcome out;
    bool all_zero = true;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, eta, rng);
        const auto vb = vielbein_from_metric(e.ms.g, eta);
        const Eigen::MatrixXd A = lovelock_tensor_fast(r, e.ms, e.cd);
        const Eigen::MatrixXd C = psi_contracted(psi_form_base(r, vb, e.cd), vb);
        const Eigen::MatrixXd expect = -vb.det / (2.0 * r) * A;
        const double scale = max_abs(expect);
        if (scale > 0.0) all_zero = false;
        // A zero reference (2r + 1 > m) makes a relative measure meaningless; use the absolute one.
        out.max_deviation = std::max(out.max_deviation, max_abs(C - expect) / (scale > 0.0 ? scale : 1.0));
        ++out.samples;
    }
    out.detail = all_zero ? "reference identically zero, absolute deviation" : "relative deviation";
    return out;
}

CheckOutcome check_psi_alternative(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Signature eta = Signature::lorentzian(m);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, eta, rng);
        const auto vb = vielbein_from_metric(e.ms.g, eta);
        out.max_deviation = std::max(out.max_deviation,
                                     detail::max_abs_difference(psi_form_base(r, vb, e.cd), psi_form_alternative(r, vb, e.cd)));
        ++out.samples;
    }
    return out;
}

CheckOutcome check_frame_covariance(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Signature eta = Signature::lorentzian(m);
    const bool vanishing = 2 * r + 1 > m;
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, eta, rng);
        const auto vb = vielbein_from_metric(e.ms.g, eta);
        const Eigen::MatrixXd K = cartan_project(detail::random_matrix(m, m, rng), CartanPart::K, eta);
        const Eigen::MatrixXd lambda = K.exp();
        const auto moved = transform_frame(vb, lambda);
        const Eigen::MatrixXd C0 = psi_contracted(psi_form_base(r, vb, e.cd), vb);
        const Eigen::MatrixXd C1 = psi_contracted(psi_form_base(r, moved, e.cd), moved);
        const double scale = vanishing ? 1.0 : std::max(max_abs(C0), 1e-300);
        out.max_deviation = std::max(out.max_deviation, max_abs(C1 - C0) / scale);
        ++out.samples;
    }
    out.detail = vanishing ? "contraction vanishes for 2r + 1 > m, absolute deviation" : "relative deviation";
    return out;
}

CheckOutcome check_scaling(int m, int r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double s = 2.0;
    const auto d = detail::random_metric(m, Signature::lorentzian(m), rng);
    MetricSample base = d.source->sample(d.x);

    // x' = s x: g' = g / s^2, dg' = dg / s^3, ddg' = ddg / s^4, evaluated at x' = s x.
    MetricSample scaled = base;
    for (auto& v : scaled.x) v *= s;
    scaled.g = base.g / (s * s);
    for (std::size_t i = 0; i < scaled.dg.size(); ++i) scaled.dg.data()[i] = base.dg.data()[i] / (s * s * s);
    for (std::size_t i = 0; i < scaled.ddg.size(); ++i) scaled.ddg.data()[i] = base.ddg.data()[i] / (s * s * s * s);

    // Round trip through the tabulated JSON format.
    const TabulatedMetric table(Signature::lorentzian(m), {base, scaled});
    const auto reread = TabulatedMetric::from_json_text(table.to_json_text());
    const auto e0 = evaluate_at(*reread, base.x);
    const auto e1 = evaluate_at(*reread, scaled.x);

    const double L0 = lovelock_density_fast(r, e0.ms, e0.cd), L1 = lovelock_density_fast(r, e1.ms, e1.cd);
    const Eigen::MatrixXd A0 = lovelock_tensor_fast(r, e0.ms, e0.cd), A1 = lovelock_tensor_fast(r, e1.ms, e1.cd);
    CheckOutcome out;
    out.samples = 1;
    // density has weight one: L' = s^{-m} L; A^{mu nu} picks up s^2.
    const double dens_dev = std::abs(L1 - std::pow(s, -m) * L0) / std::max(std::abs(std::pow(s, -m) * L0), 1e-300);
    const double a_scale = max_abs(A0);
    const double tens_dev = a_scale > 0.0 ? max_abs(A1 - s * s * A0) / (s * s * a_scale) : max_abs(A1);
    out.max_deviation = std::max(dens_dev, tens_dev);
    out.detail = "density " + detail::sci(dens_dev) + ", tensor " + detail::sci(tens_dev);
    return out;
}

namespace {

CheckOutcome eds_outcome(const std::vector<EdsEntry>& entries, bool include_psi, CheckOutcome out) {
    for (const auto& en : entries) {
        if (en.structural) continue;
        if (!include_psi && en.name == "Psi^ij") continue;
        const double ratio = en.residual / en.tolerance;
        if (ratio >= out.max_deviation) {
            out.max_deviation = ratio;
            out.detail = "worst " + en.name + " " + detail::sci(en.residual) + " vs " + detail::sci(en.tolerance);
        }
    }
    return out;
}

}  // namespace

CheckOutcome check_eds_levi_civita(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Signature eta = Signature::lorentzian(m);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto e = random_evaluated(m, eta, rng);
        const auto vb = vielbein_from_metric(e.ms.g, eta);
        out = eds_outcome(eds_residuals(1, vb, e.cd, e.ms), false, out);
        ++out.samples;
    }
    return out;
}

CheckOutcome check_eds_schwarzschild() {
    const auto src = make_builtin_metric("schwarzschild", {{"M", "1"}});
    const auto e = evaluate_at(*src, src->default_point());
    const auto vb = vielbein_from_metric(e.ms.g, src->signature());
    CheckOutcome out;
    out.samples = 1;
    return eds_outcome(eds_residuals(1, vb, e.cd, e.ms), true, out);
}

}  // namespace lovelock
