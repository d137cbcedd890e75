#include <doctest.h>

#include <cmath>
#include <random>

#include "lovelock/gravity.hpp"
#include "lovelock/metrics.hpp"
#include "support.hpp"

using namespace lovelock;

namespace {

MetricSample at(const MetricSource& s, std::vector<double> x) { return s.sample(x); }

// Christoffel symbols and their derivatives straight from g, dg, ddg.
struct OracleConnection {
    Tensor gamma, dgamma;
};

OracleConnection oracle_connection(const MetricSample& ms) {
    const int m = ms.m;
    const auto& gi = ms.ginv;
    // dginv^{ab}_rho = -g^{ac} d_rho g_{cd} g^{db}
    Tensor dgi(m, 3);
    for (int r = 0; r < m; ++r)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double v = 0.0;
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d) v -= gi(a, c) * ms.dg(r, c, d) * gi(d, b);
                dgi(r, a, b) = v;
            }
    auto low = [&](int l, int n, int s) { return 0.5 * (ms.dg(n, l, s) + ms.dg(s, l, n) - ms.dg(l, n, s)); };
    auto dlow = [&](int r, int l, int n, int s) { return 0.5 * (ms.ddg(r, n, l, s) + ms.ddg(r, s, l, n) - ms.ddg(r, l, n, s)); };
    OracleConnection c{Tensor(m, 3), Tensor(m, 4)};
    for (int mu = 0; mu < m; ++mu)
        for (int n = 0; n < m; ++n)
            for (int s = 0; s < m; ++s)
                for (int l = 0; l < m; ++l) {
                    c.gamma(mu, n, s) += gi(mu, l) * low(l, n, s);
                    for (int r = 0; r < m; ++r) c.dgamma(r, mu, n, s) += dgi(r, mu, l) * low(l, n, s) + gi(mu, l) * dlow(r, l, n, s);
                }
    return c;
}

Eigen::MatrixXd oracle_ricci(const MetricSample& ms) {
    const int m = ms.m;
    const auto c = oracle_connection(ms);
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(m, m);
    // R_{rho nu} = d_s G^s_{nu rho} - d_nu G^s_{s rho} + G^s_{s l} G^l_{nu rho} - G^s_{nu l} G^l_{s rho}
    for (int r = 0; r < m; ++r)
        for (int n = 0; n < m; ++n)
            for (int s = 0; s < m; ++s) {
                ric(r, n) += c.dgamma(s, s, n, r) - c.dgamma(n, s, s, r);
                for (int l = 0; l < m; ++l) ric(r, n) += c.gamma(s, s, l) * c.gamma(l, n, r) - c.gamma(s, n, l) * c.gamma(l, s, r);
            }
    return ric;
}

std::unique_ptr<MetricSource> poly(int m, unsigned long long seed) { return make_random_poly_metric(m, seed, 0.1, Signature::lorentzian(m)); }

}  // namespace

TEST_SUITE("lovelock") {

TEST_CASE("Christoffel symbols") {
    const auto flat = make_builtin_metric("minkowski", {});
    CHECK(christoffel(at(*flat, {0, 0, 0, 0})).gamma.max_abs() == 0.0);

    const auto sph = make_builtin_metric("sphere", {{"a", "1.5"}});
    const double th = 0.8;
    const auto c = christoffel(at(*sph, {th, 0.3}));
    CHECK(c.gamma(0, 1, 1) == doctest::Approx(-std::sin(th) * std::cos(th)));
    CHECK(c.gamma(1, 0, 1) == doctest::Approx(std::cos(th) / std::sin(th)));

    for (unsigned long long seed = 1; seed <= 5; ++seed) {
        const auto src = poly(4, seed);
        const auto ms = at(*src, {0.1, -0.2, 0.3, 0.05});
        const auto mine = christoffel(ms);
        const auto ref = oracle_connection(ms);
        for (std::size_t i = 0; i < mine.gamma.size(); ++i) REQUIRE(std::abs(mine.gamma.data()[i] - ref.gamma.data()[i]) < 1e-13);
        for (std::size_t i = 0; i < mine.dgamma.size(); ++i) REQUIRE(std::abs(mine.dgamma.data()[i] - ref.dgamma.data()[i]) < 1e-12);
    }
}

TEST_CASE("curvature oracles") {
    const auto flat = make_builtin_metric("minkowski", {});
    CHECK(curvature(at(*flat, {1, 2, 3, 4})).riemann.max_abs() == 0.0);

    const auto unit = make_builtin_metric("sphere", {});
    CHECK(curvature(at(*unit, {1.0, 0.5})).scalar == doctest::Approx(2.0));

    const auto bh = make_builtin_metric("schwarzschild", {{"M", "1"}});
    const auto ms = at(*bh, {0, 10, 1.0, 0.5});
    CHECK(oracle_ricci(ms).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(curvature(ms).ricci.cwiseAbs().maxCoeff() < 1e-8);

    const auto src = poly(4, 9);
    const auto pm = at(*src, {0.2, 0.1, -0.3, 0.4});
    CHECK((curvature(pm).ricci - oracle_ricci(pm)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vielbein") {
    const auto eta = Signature::lorentzian(4);
    Eigen::MatrixXd g = Eigen::Vector4d(-1, 4, 9, 16).asDiagonal();
    const auto vb = vielbein_from_metric(g, eta);
    CHECK((vb.coframe.cwiseAbs() - Eigen::MatrixXd(Eigen::Vector4d(1, 2, 3, 4).asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::MatrixXd e = Eigen::Vector4d(-1, 1, 1, 1).asDiagonal();
    CHECK((vielbein_from_metric(e, eta).coframe.cwiseAbs() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(4);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) D(i, i) = eta[i];
    for (int n = 0; n < 10; ++n) {
        const Eigen::MatrixXd gg = at(*poly(4, rng()), {0.1, 0.2, 0.3, 0.4}).g;
        const auto v = vielbein_from_metric(gg, eta);
        REQUIRE((v.coframe.transpose() * D * v.coframe - gg).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS(vielbein_from_metric(Eigen::MatrixXd::Identity(4, 4), eta));
}

TEST_CASE("density") {
    const auto flat = make_builtin_metric("minkowski", {});
    const auto fm = at(*flat, {0, 0, 0, 0});
    CHECK(lovelock_density(1, fm, curvature(fm)) == 0.0);
    CHECK(lovelock_density(2, fm, curvature(fm)) == 0.0);

    // One constant relating the r = 1 density to sqrt|g| R across metrics.
    std::vector<double> cs;
    for (unsigned long long seed = 20; seed < 26; ++seed) {
        const auto ms = at(*poly(4, seed), {0.1, 0.3, -0.2, 0.0});
        const auto cd = curvature(ms);
        cs.push_back(lovelock_density(1, ms, cd) / (std::sqrt(std::abs(ms.det_g)) * cd.scalar));
    }
    for (double c : cs) CHECK(c == doctest::Approx(cs.front()).epsilon(1e-10));

    // S^2(a) x S^2(b): Gauss-Bonnet combination R^2 - 4 Ric^2 + Riem^2 = 8/(a b)^2.
    const double a = 1.0, b = 2.0;
    const auto prod = make_builtin_metric("sphere-product", {{"a", "1"}, {"b", "2"}});
    const std::vector<double> x{1.1, 0.4, 0.6, 0.2};
    const auto ms = at(*prod, x);
    const double sqrtg = a * a * b * b * std::sin(x[0]) * std::sin(x[2]);
    CHECK(lovelock_density(2, ms, curvature(ms)) == doctest::Approx(4.0 * 8.0 / (a * a * b * b) * sqrtg).epsilon(1e-12));
}

TEST_CASE("Lovelock tensor") {
    const auto flat = make_builtin_metric("minkowski", {});
    const auto fm = at(*flat, {0, 0, 0, 0});
    CHECK(lovelock_tensor(1, fm, curvature(fm)).cwiseAbs().maxCoeff() == 0.0);

    const auto ms = at(*poly(4, 3), {0.1, 0.2, 0.3, 0.4});
    const auto cd = curvature(ms);
    CHECK(lovelock_tensor(2, ms, cd).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd A = lovelock_tensor(1, ms, cd);
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((A - lovelock_tensor_fast(1, ms, cd)).cwiseAbs().maxCoeff() < 1e-13);

    // Against Ricci - 1/2 g R from the oracle, raised.
    const Eigen::MatrixXd ric = oracle_ricci(ms);
    const double R = (ms.ginv * ric).trace();
    const Eigen::MatrixXd G = ms.ginv * (ric - 0.5 * ms.g * R) * ms.ginv;
    const double c = A(0, 0) / G(0, 0);
    CHECK((A - c * G).cwiseAbs().maxCoeff() < 1e-10 * A.cwiseAbs().maxCoeff());

    const auto bh = make_builtin_metric("schwarzschild", {{"M", "1"}});
    const auto bm = at(*bh, {0, 10, 1.0, 0.5});
    CHECK(lovelock_tensor(1, bm, curvature(bm)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("divergence") {
    const auto flat = make_builtin_metric("minkowski", {});
    std::vector<double> x{0, 0, 0, 0};
    CHECK(divergence_lovelock(1, *flat, x, 1e-3).max_residual == 0.0);
    const auto src = poly(4, 5);
    std::vector<double> y{0.1, -0.1, 0.2, 0.0};
    const auto d = divergence_lovelock(1, *src, y, 1e-3);
    CHECK(d.max_residual < 1e-5);
    REQUIRE(d.ratio.has_value());
    CHECK(*d.ratio > 3.5);
    CHECK(*d.ratio < 4.5);
}

TEST_CASE("Psi forms") {
    const auto eta = Signature::lorentzian(4);
    const auto flat = make_builtin_metric("minkowski", {});
    const auto fm = at(*flat, {0, 0, 0, 0});
    for (const auto& f : psi_form_base(1, vielbein_from_metric(fm.g, eta), curvature(fm))) CHECK(f.is_zero());

    const auto ms = at(*poly(4, 8), {0.2, 0.1, 0.0, -0.3});
    const auto cd = curvature(ms);
    const auto vb = vielbein_from_metric(ms.g, eta);
    const auto psi = psi_form_base(1, vb, cd);
    const Eigen::MatrixXd C = psi_contracted(psi, vb);
    const Eigen::MatrixXd A = lovelock_tensor(1, ms, cd);
    CHECK((C + vb.det / 2.0 * A).cwiseAbs().maxCoeff() < 1e-9 * A.cwiseAbs().maxCoeff());
    const auto alt = psi_form_alternative(1, vb, cd);
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(max_abs_difference(psi[i], alt[i]) < 1e-10);
}

TEST_CASE("EDS residuals") {
    const auto bh = make_builtin_metric("schwarzschild", {{"M", "1"}});
    const auto ms = at(*bh, {0, 10, 1.0, 0.5});
    const auto entries = eds_residuals(1, vielbein_from_metric(ms.g, bh->signature()), curvature(ms), ms);
    int structural = 0;
    for (const auto& e : entries) {
        if (e.structural) ++structural;
        else CHECK_MESSAGE(e.residual < e.tolerance, e.name);
    }
    CHECK(structural == 2);
}

TEST_CASE("tabulated metrics") {
    const auto src = poly(3, 2);
    const auto s0 = at(*src, {0.1, 0.2, 0.3});
    const TabulatedMetric table(Signature::lorentzian(3), {s0});
    const auto back = TabulatedMetric::from_json_text(table.to_json_text());
    const auto s1 = back->sample(s0.x);
    CHECK((s1.g - s0.g).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 0; i < s0.ddg.size(); ++i) REQUIRE(s1.ddg.data()[i] == s0.ddg.data()[i]);
    CHECK_THROWS(back->sample(std::vector{0.5, 0.5, 0.5}));
    CHECK_THROWS(TabulatedMetric::from_json_text("{not json"));
    CHECK_THROWS(TabulatedMetric::from_json_text(R"({"dim": 2, "signature": [1, 1], "points": []})"));
}

TEST_CASE("metric parameter validation") {
    CHECK_THROWS(make_builtin_metric("schwarzschild", {{"M", "-1"}}));
    CHECK_THROWS(make_builtin_metric("sphere", {{"a", "x"}}));
    CHECK(make_builtin_metric("no-such-metric", {}) == nullptr);
    const auto bh = make_builtin_metric("schwarzschild", {{"M", "1"}});
    CHECK_THROWS(bh->sample(std::vector{0.0, 1.5, 1.0, 0.5}));
}

}
