#include <doctest.h>

#include <random>

#include "lovelock/jetforms.hpp"
#include "support.hpp"

using namespace lovelock;

namespace {

JetPoint flat_point(int m) {
    return make_jet_point(std::vector<double>(static_cast<std::size_t>(m), 0.0), Eigen::MatrixXd::Identity(m, m),
                          std::vector<double>(static_cast<std::size_t>(m * m * m), 0.0));
}

}  // namespace

TEST_SUITE("jetforms") {

TEST_CASE("jet point construction") {
    const auto jp = flat_point(3);
    CHECK((jp.coframe - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
    CHECK_THROWS(make_jet_point({0, 0}, Eigen::MatrixXd::Zero(2, 2), std::vector<double>(8, 0.0)));
    std::mt19937_64 rng(1);
    const auto r = random_jet_point(3, rng);
    CHECK((r.coframe * r.frame - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("canonical forms at the identity frame") {
    const int m = 3;
    const auto jp = flat_point(m);
    const auto cf = canonical_forms(jp);
    const JetLayout L{m};
    for (int k = 0; k < m; ++k) CHECK(max_abs_difference(cf.theta[k], SparseAltForm::basis_covector(L.dim(), k)) == 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) CHECK(max_abs_difference(cf.w(i, j), SparseAltForm::basis_covector(L.dim(), L.de(i, j))) == 0.0);
    for (const auto& t : cf.torsion) CHECK(t.is_zero());
}

TEST_CASE("torsion vanishes for symmetric jets and matches the closed form") {
    const int m = 3;
    std::mt19937_64 rng(2);
    std::vector<double> jet(27);
    for (int mu = 0; mu < m; ++mu)
        for (int k = 0; k < m; ++k)
            for (int s = k; s < m; ++s) jet[(mu * m + k) * m + s] = jet[(mu * m + s) * m + k] = testing::uniform(rng);
    const auto sym = make_jet_point({0, 0, 0}, Eigen::MatrixXd::Identity(m, m), jet);
    for (const auto& t : canonical_forms(sym).torsion) CHECK(t.max_abs() < 1e-14);
    for (int n = 0; n < 10; ++n) {
        const auto jp = random_jet_point(m, rng);
        const auto cf = canonical_forms(jp);
        for (int k = 0; k < m; ++k) REQUIRE(max_abs_difference(cf.torsion[k], torsion_closed_form(jp, k)) < 1e-12);
    }
}

TEST_CASE("torsion-zero residual and projection") {
    const int m = 3;
    std::mt19937_64 rng(3);
    CHECK(torsion_zero_norm(flat_point(m)) == 0.0);
    const auto generic = random_jet_point(m, rng);
    CHECK(torsion_zero_norm(generic) > 1e-3);
    const auto p = project_to_T0(generic);
    CHECK(torsion_zero_norm(p) < 1e-12);
    const auto pp = project_to_T0(p);
    for (std::size_t i = 0; i < p.jet.size(); ++i) REQUIRE(std::abs(pp.jet[i] - p.jet[i]) < 1e-12);

    std::vector<double> anti(27, 0.0);
    anti[(0 * m + 1) * m + 2] = 1.0;
    anti[(0 * m + 2) * m + 1] = -1.0;
    const auto q = project_to_T0(make_jet_point({0, 0, 0}, Eigen::MatrixXd::Identity(m, m), anti));
    for (double v : q.jet) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("sparling examples") {
    const int m = 3;
    const auto jp = flat_point(m);
    const JetLayout L{m};
    const auto top = sparling(jp, std::vector<int>{});
    CHECK(top.coefficient(std::vector{0, 1, 2}) == doctest::Approx(1.0));
    CHECK(sparling(jp, std::vector{0, 1, 2}).coefficient(std::vector<int>{}) == doctest::Approx(1.0));
    CHECK(sparling(jp, std::vector{1, 1}).is_zero());
    // theta_0 = 1/2 eps_{0jk} dx^j ^ dx^k = dx^1 ^ dx^2
    const auto t0 = sparling(jp, std::vector{0});
    CHECK(max_abs_difference(t0, wedge(SparseAltForm::basis_covector(L.dim(), 1), SparseAltForm::basis_covector(L.dim(), 2))) < 1e-15);
}

TEST_CASE("sparling agrees with the contraction construction") {
    std::mt19937_64 rng(4);
    for (int m : {3, 4})
        for (int n = 0; n < 25; ++n) {
            const auto jp = random_jet_point(m, rng);
            const int p = static_cast<int>(rng() % static_cast<unsigned>(m + 1));
            IndexTuple idx;
            for (int i = 0; i < p; ++i) idx.push_back(static_cast<int>(rng() % static_cast<unsigned>(m)));
            REQUIRE(max_abs_difference(sparling(jp, idx), sparling_via_contraction(jp, idx)) < 1e-12);
        }
}

TEST_CASE("vertical lifts annihilate theta and omega") {
    std::mt19937_64 rng(5);
    const int m = 3;
    const auto jp = random_jet_point(m, rng);
    const auto cf = canonical_forms(jp);
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
            for (int t = 0; t < m; ++t) {
                const auto v = vertical_lift_vector(jp, r, s, t);
                for (const auto& th : cf.theta) REQUIRE(interior(v, th).is_zero());
                for (const auto& w : cf.omega) REQUIRE(interior(v, w).max_abs() < 1e-12);
            }
}

TEST_CASE("vertical lift contraction with curvature") {
    // Observed convention: v_{rst} _| Omega^k_l = -delta^k_t delta^s_l theta^r.
    std::mt19937_64 rng(15);
    const int m = 3;
    const auto jp = random_jet_point(m, rng);
    const auto cf = canonical_forms(jp);
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
            for (int t = 0; t < m; ++t) {
                const auto v = vertical_lift_vector(jp, r, s, t);
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l) {
                        SparseAltForm expect(JetLayout{m}.dim(), 1);
                        if (k == t && s == l) expect = -1.0 * cf.theta[r];
                        REQUIRE(max_abs_difference(interior(v, cf.curv(k, l)), expect) < 1e-12);
                    }
            }
}

TEST_CASE("Lagrangian form at the flat point") {
    const int m = 3;
    const auto eta = Signature::lorentzian(m);
    const auto jp = flat_point(m);
    CHECK(lovelock_lagrangian_form(jp, 2, eta).degenerate);
    const auto l0 = lovelock_lagrangian_form(jp, 0, eta).form;
    CHECK(max_abs_difference(l0, sparling(jp, std::vector<int>{})) < 1e-15);
    // Curvature is not zero as a form on the jet space; it vanishes along the section x -> (x, id, 0).
    const Eigen::MatrixXd section = Eigen::MatrixXd::Identity(JetLayout{m}.dim(), m);
    CHECK_FALSE(lovelock_lagrangian_form(jp, 1, eta).form.is_zero());
    CHECK(pullback(section, lovelock_lagrangian_form(jp, 1, eta).form).is_zero());
    for (const auto& c : canonical_forms(jp).curvature) CHECK(pullback(section, c).is_zero());
}

TEST_CASE("dlambda identity") {
    const auto eta = Signature::lorentzian(3);
    CHECK(dlambda_check(flat_point(3), 1, eta).max_deviation < 1e-12);
    std::mt19937_64 rng(6);
    for (int n = 0; n < 5; ++n) {
        const auto rep = dlambda_check(random_t0_point(3, rng), 1, eta);
        REQUIRE(rep.max_deviation < 1e-10);
        REQUIRE(rep.lhs_norm > 0.0);
    }
}

}
