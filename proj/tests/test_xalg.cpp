#include <doctest.h>

#include <random>

#include "lovelock/xalg.hpp"
#include "support.hpp"

using namespace lovelock;

namespace {

SparseAltForm dx(int n, int i) { return SparseAltForm::basis_covector(n, i); }

}  // namespace

TEST_SUITE("xalg") {

TEST_CASE("basis covectors and wedge examples") {
    const auto a = dx(4, 0);
    REQUIRE(a.size() == 1u);
    CHECK(a.coefficient(std::vector{0}) == 1.0);
    CHECK(wedge(dx(4, 0), dx(4, 0)).is_zero());
    CHECK(interior(TangentVector::unit(4, 0), dx(4, 0)).coefficient(std::vector<int>{}) == 1.0);

    CHECK(wedge(dx(4, 0), dx(4, 1)).coefficient(std::vector{0, 1}) == 1.0);
    const auto b = wedge(dx(4, 0) + dx(4, 1), dx(4, 1));
    CHECK(b.size() == 1u);
    CHECK(b.coefficient(std::vector{0, 1}) == 1.0);
    CHECK(wedge(dx(4, 1), dx(4, 0)).coefficient(std::vector{0, 1}) == -1.0);
}

TEST_CASE("linear combinations") {
    std::mt19937_64 rng(5);
    const auto a = testing::random_form(5, 2, rng), b = testing::random_form(5, 2, rng);
    CHECK(linear_combine(std::vector{1.0, -1.0}, std::vector{a, a}).is_zero());
    CHECK(max_abs_difference(linear_combine(std::vector{2.0, 0.0}, std::vector{a, b}), 2.0 * a) == 0.0);
    CHECK(max_abs_difference(0.5 * (a + a), a) == 0.0);
}

TEST_CASE("interior product examples") {
    const auto f = wedge(dx(4, 0), dx(4, 1));
    CHECK(max_abs_difference(interior(TangentVector::unit(4, 1), f), -1.0 * dx(4, 0)) == 0.0);
    CHECK(max_abs_difference(interior(TangentVector::unit(4, 0), f), dx(4, 1)) == 0.0);
}

TEST_CASE("wedge agrees with the shuffle oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 6, k = 1 + trial % 3, l = 1 + (trial / 3) % 3;
        const auto a = testing::random_form(n, k, rng), b = testing::random_form(n, l, rng);
        const Eigen::MatrixXd V = testing::random_matrix(n, k + l, rng);
        REQUIRE(evaluate(wedge(a, b), V) == doctest::Approx(testing::wedge_value(a, b, V)).epsilon(1e-12));
        REQUIRE(evaluate(a, V.leftCols(k)) == doctest::Approx(testing::form_value(a, V.leftCols(k))).epsilon(1e-12));
    }
}

TEST_CASE("property: graded commutativity and associativity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = trial % 4, l = (trial / 4) % 3, p = 1 + trial % 2;
        const auto a = testing::random_form(7, k, rng), b = testing::random_form(7, l, rng), c = testing::random_form(7, p, rng);
        const double sign = (k * l) % 2 ? -1.0 : 1.0;
        REQUIRE(max_abs_difference(wedge(a, b), sign * wedge(b, a)) < 1e-12);
        REQUIRE(max_abs_difference(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) < 1e-12);
    }
}

TEST_CASE("property: interior is a nilpotent antiderivation") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 6;
        TangentVector v(n);
        for (int i = 0; i < n; ++i) v.set(i, testing::uniform(rng));
        const auto a = testing::random_form(n, 2, rng), b = testing::random_form(n, 3, rng);
        const auto lhs = interior(v, wedge(a, b));
        const auto rhs = wedge(interior(v, a), b) + wedge(a, interior(v, b));
        REQUIRE(max_abs_difference(lhs, rhs) < 1e-12);
        REQUIRE(interior(v, interior(v, b)).max_abs() < 1e-12);
    }
}

TEST_CASE("pullback examples and functoriality") {
    std::mt19937_64 rng(17);
    const auto a = testing::random_form(5, 2, rng);
    CHECK(max_abs_difference(pullback(Eigen::MatrixXd::Identity(5, 5), a), a) == 0.0);
    CHECK(pullback(Eigen::MatrixXd::Zero(5, 4), a).is_zero());
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd L1 = testing::random_matrix(6, 5, rng), L2 = testing::random_matrix(5, 4, rng);
        const auto b = testing::random_form(6, 1 + trial % 4, rng);
        REQUIRE(max_abs_difference(pullback(L1 * L2, b), pullback(L2, pullback(L1, b))) < 1e-12);
    }
}

TEST_CASE("approximate equality") {
    const auto a = wedge(dx(4, 0), dx(4, 2));
    CHECK(approx_eq(a, a, 0.0).equal);
    CHECK_FALSE(approx_eq(a, 2.0 * a, 1e-9).equal);
    CHECK(approx_eq(a, a + 1e-15 * wedge(dx(4, 0), dx(4, 1)), 1e-12).equal);
}

TEST_CASE("index mask merge sign") {
    const auto a = IndexMask::from_indices(std::vector{1, 4});
    const auto b = IndexMask::from_indices(std::vector{0, 2});
    // (1,4,0,2) -> sorted needs 3 transpositions
    CHECK(merge_sign(a, b) == -1);
    CHECK(IndexMask::from_indices(std::vector{3, 100}).indices() == IndexTuple{3, 100});
}

TEST_CASE("vector-valued combinators") {
    const int n = 5, m = 2;
    std::mt19937_64 rng(19);
    // pairing of 0-forms: sum of products
    VectorValuedForm u(ValueSpace::covector(m), n, 0), w(ValueSpace::vector(m), n, 0);
    u[0] = SparseAltForm::scalar(n, 2.0);
    u[1] = SparseAltForm::scalar(n, 3.0);
    w[0] = SparseAltForm::scalar(n, 5.0);
    w[1] = SparseAltForm::scalar(n, -1.0);
    const auto p = bilinear_combine(Bilinear::Pairing, u, w);
    CHECK(p[0].coefficient(std::vector<int>{}) == doctest::Approx(7.0));

    // [omega ^, omega] = 2 omega ^ omega for a matrix-valued 1-form
    VectorValuedForm om(ValueSpace::matrix(m), n, 1);
    for (auto& c : om.comps) c = testing::random_form(n, 1, rng, 3);
    const auto br = bilinear_combine(Bilinear::Bracket, om, om);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            FormBuilder acc(n, 2);
            for (int k = 0; k < m; ++k) acc.add_wedge(om[i * m + k], om[k * m + j], 2.0);
            REQUIRE(max_abs_difference(br[i * m + j], acc.build()) < 1e-12);
        }

    const auto z = apply_linear(Eigen::MatrixXd::Zero(m * m, m * m), ValueSpace::matrix(m), om);
    CHECK(z.max_abs() == 0.0);
}

}
