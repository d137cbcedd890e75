#include <doctest.h>

#include <random>

#include "lovelock/valg.hpp"
#include "support.hpp"

using namespace lovelock;

namespace {

SparseAltForm basis(int m, IndexTuple idx) {
    const int k = static_cast<int>(idx.size());
    return SparseAltForm::from_terms(m, k, std::vector{std::pair{std::move(idx), 1.0}});
}

// Gram determinant of the listed basis vectors under a diagonal metric.
double gram(const IndexTuple& a, const IndexTuple& b, const Signature& eta) {
    const int k = static_cast<int>(a.size());
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = a[i] == b[j] ? eta[a[i]] : 0.0;
    return k ? g.determinant() : 1.0;
}

}  // namespace

TEST_SUITE("valg") {

TEST_CASE("eta_hat examples") {
    const auto E = Signature::euclidean(4), L = Signature::lorentzian(4);
    CHECK(eta_hat(basis(4, {1, 2}), basis(4, {1, 2}), E) == doctest::Approx(1.0));
    CHECK(eta_hat(basis(4, {0, 1}), basis(4, {0, 1}), L) == doctest::Approx(-1.0));
    CHECK(eta_hat(basis(4, {1, 2}), basis(4, {1, 3}), E) == 0.0);
}

TEST_CASE("eta_hat matches Gram determinants on basis pairs") {
    const auto L = Signature::lorentzian(4);
    for (int k = 0; k <= 4; ++k)
        for (const auto& a : combinations(4, k))
            for (const auto& b : combinations(4, k)) REQUIRE(eta_hat(basis(4, a), basis(4, b), L) == doctest::Approx(gram(a, b, L)));
}

TEST_CASE("star of the top vector and of the unit scalar") {
    for (int m = 1; m <= 5; ++m)
        for (const auto& eta : {Signature::euclidean(m), Signature::lorentzian(m)}) {
            IndexTuple all(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) all[i] = i;
            const auto s = hodge_star(basis(m, all), eta);
            REQUIRE(s.degree() == 0);
            REQUIRE(std::abs(s.coefficient(std::vector<int>{})) == doctest::Approx(1.0));
        }
}

TEST_CASE("property: defining identity on random pairs") {
    std::mt19937_64 rng(8);
    for (int m = 2; m <= 5; ++m)
        for (const auto& eta : {Signature::euclidean(m), Signature::lorentzian(m)})
            for (int k = 0; k <= m; ++k)
                for (int n = 0; n < 10; ++n) {
                    const auto a = testing::random_form(m, k, rng, 4), b = testing::random_form(m, k, rng, 4);
                    IndexTuple all(static_cast<std::size_t>(m));
                    for (int i = 0; i < m; ++i) all[i] = i;
                    REQUIRE(std::abs(wedge(a, hodge_star(b, eta)).coefficient(all) - eta_hat(a, b, eta)) < 1e-12);
                }
}

TEST_CASE("hodge matrix squares to the sign law") {
    for (int m = 2; m <= 5; ++m) {
        const auto eta = Signature::lorentzian(m);
        for (int k = 0; k <= m; ++k) {
            const Eigen::MatrixXd sq = hodge_matrix(m - k, eta) * hodge_matrix(k, eta);
            const double sign = ((k * (m - k)) % 2 ? -1.0 : 1.0) * eta.det();
            REQUIRE((sq - sign * Eigen::MatrixXd::Identity(sq.rows(), sq.cols())).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("Cartan projectors") {
    std::mt19937_64 rng(9);
    const auto eta = Signature::lorentzian(4);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) D(i, i) = eta[i];
    for (int n = 0; n < 10; ++n) {
        const Eigen::MatrixXd A = testing::random_matrix(4, 4, rng);
        const Eigen::MatrixXd K = cartan_project(A, CartanPart::K, eta), P = cartan_project(A, CartanPart::P, eta);
        REQUIRE((K + P - A).cwiseAbs().maxCoeff() < 1e-14);
        REQUIRE((cartan_project(K, CartanPart::K, eta) - K).cwiseAbs().maxCoeff() < 1e-14);
        REQUIRE(cartan_project(K, CartanPart::P, eta).cwiseAbs().maxCoeff() < 1e-14);
        // K preserves eta: K^T eta + eta K = 0
        REQUIRE((K.transpose() * D + D * K).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("Xi construction paths agree") {
    std::mt19937_64 rng(10);
    for (int m : {3, 4}) {
        const auto eta = Signature::lorentzian(m);
        const auto cf = canonical_forms(random_jet_point(m, rng));
        const auto a = xi_r(cf, 1, eta), b = xi_r_via_hodge(cf, 1, eta);
        REQUIRE(a.comps.size() == b.comps.size());
        for (std::size_t c = 0; c < a.comps.size(); ++c) REQUIRE(max_abs_difference(a[c], b[c]) < 1e-10);
    }
}

TEST_CASE("invariant pairing is proportional to the Lagrangian") {
    std::mt19937_64 rng(12);
    const auto eta = Signature::lorentzian(3);
    std::vector<double> cs;
    for (int n = 0; n < 6; ++n) {
        const auto rep = xi_pairing_check(random_jet_point(3, rng), 1, eta);
        if (rep.degenerate) continue;
        REQUIRE(rep.residual < 1e-10);
        cs.push_back(rep.constant);
    }
    REQUIRE(cs.size() >= 3u);
    for (double c : cs) CHECK(c == doctest::Approx(cs.front()).epsilon(1e-9));
}

TEST_CASE("pairing at the flat point") {
    const auto jp = make_jet_point({0, 0, 0}, Eigen::MatrixXd::Identity(3, 3), std::vector<double>(27, 0.0));
    const auto rep = xi_pairing_check(jp, 1, Signature::lorentzian(3));
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.residual < 1e-10);
    CHECK(rep.constant == doctest::Approx(-0.5));
}

}
