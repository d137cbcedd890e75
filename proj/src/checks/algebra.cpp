#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "lovelock/alt.hpp"
#include "lovelock/checks.hpp"
#include "lovelock/valg.hpp"
#include "lovelock/xalg.hpp"
#include "util.hpp"

namespace lovelock {

using detail::random_form;
using detail::uniform;
using detail::uniform_int;

namespace {

using Int = std::int64_t;

// Fraction-free Gaussian elimination, exact for small integer matrices.
Int bareiss_det(std::vector<std::vector<Int>> a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

Int ipow(int base, int e) {
    Int v = 1;
    for (int i = 0; i < e; ++i) v *= base;
    return v;
}

// Row-major offset of a tuple with extent n.
Int offset(const IndexTuple& t, int n) {
    Int o = 0;
    for (int v : t) o = o * n + v;
    return o;
}

// Dense component array of a k-form: A[i1..ik] = alternating extension of the coefficients.
std::vector<double> to_dense(const SparseAltForm& a) {
    const int n = a.space_dim(), k = a.degree();
    std::vector<double> d(static_cast<std::size_t>(ipow(n, k)), 0.0);
    const auto perms = permutations(k);
    for (const auto& t : a.terms()) {
        const IndexTuple base = t.key.indices();
        for (const auto& sp : perms) {
            IndexTuple idx(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) idx[i] = base[sp.perm[i]];
            d[static_cast<std::size_t>(offset(idx, n))] = sp.sign * t.coeff;
        }
    }
    return d;
}

// (k+l)!/(k! l!) Alt(A (x) B), straight from the alternation sum.
std::vector<double> dense_wedge(const std::vector<double>& A, int k, const std::vector<double>& B, int l, int n) {
    const int p = k + l;
    std::vector<double> out(static_cast<std::size_t>(ipow(n, p)), 0.0);
    const auto perms = permutations(p);
    const double scale = 1.0 / static_cast<double>(factorial(k) * factorial(l));
    for_each_tuple(n, p, [&](const IndexTuple& idx) {
        double acc = 0.0;
        for (const auto& sp : perms) {
            IndexTuple a(static_cast<std::size_t>(k)), b(static_cast<std::size_t>(l));
            for (int i = 0; i < k; ++i) a[i] = idx[sp.perm[i]];
            for (int i = 0; i < l; ++i) b[i] = idx[sp.perm[k + i]];
            acc += sp.sign * A[static_cast<std::size_t>(offset(a, n))] * B[static_cast<std::size_t>(offset(b, n))];
        }
        out[static_cast<std::size_t>(offset(idx, n))] = scale * acc;
    });
    return out;
}

std::vector<double> dense_interior(const std::vector<double>& v, const std::vector<double>& A, int k, int n) {
    std::vector<double> out(static_cast<std::size_t>(ipow(n, k - 1)), 0.0);
    for_each_tuple(n, k - 1, [&](const IndexTuple& rest) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            IndexTuple full{i};
            full.insert(full.end(), rest.begin(), rest.end());
            acc += v[static_cast<std::size_t>(i)] * A[static_cast<std::size_t>(offset(full, n))];
        }
        out[static_cast<std::size_t>(offset(rest, n))] = acc;
    });
    return out;
}

double dense_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

CheckOutcome check_eps_delta(int m) {
    CheckOutcome out;
    for (int k = 0; k <= m; ++k) {
        const auto rep = verify_eps_delta(m, k);
        out.max_deviation = std::max(out.max_deviation, static_cast<double>(rep.max_abs_deviation));
        out.samples += static_cast<int>(rep.assignments);
    }
    return out;
}

CheckOutcome check_antisymmetrizer_delta(int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int p = 1; p <= m; ++p) {
        if (ipow(m, 2 * p) > 100'000'000) {
            out.detail = "ranks above " + std::to_string(p - 1) + " skipped at this dimension";
            break;
        }
        const Int size = ipow(m, p);
        std::vector<Int> a(static_cast<std::size_t>(size));
        for (auto& v : a) v = uniform_int(rng, -5, 5);
        const auto perms = permutations(p);
        for_each_tuple(m, p, [&](const IndexTuple& mu) {
            Int lhs = 0;
            for_each_tuple(m, p, [&](const IndexTuple& nu) {
                const int d = gkdelta(mu, nu);
                if (d) lhs += d * a[static_cast<std::size_t>(offset(nu, m))];
            });
            // p! a^{[mu]}
            Int rhs = 0;
            for (const auto& sp : perms) {
                IndexTuple s(static_cast<std::size_t>(p));
                for (int i = 0; i < p; ++i) s[i] = mu[sp.perm[i]];
                rhs += sp.sign * a[static_cast<std::size_t>(offset(s, m))];
            }
            out.max_deviation = std::max(out.max_deviation, static_cast<double>(std::llabs(lhs - rhs)));
            ++out.samples;
        });
    }
    return out;
}

CheckOutcome check_determinant_epsilon(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto perms = permutations(m);
    CheckOutcome out;
    for (int s = 0; s < samples; ++s) {
        std::vector<std::vector<Int>> A(static_cast<std::size_t>(m), std::vector<Int>(static_cast<std::size_t>(m)));
        for (auto& row : A)
            for (auto& v : row) v = uniform_int(rng, -3, 3);
        const Int det = bareiss_det(A);
        for_each_tuple(m, m, [&](const IndexTuple& j) {
            // eps_{i1..im} vanishes off permutations, so the sum runs over those.
            Int lhs = 0;
            for (const auto& sp : perms) {
                Int prod = levi_civita(sp.perm);
                for (int t = 0; t < m; ++t) prod *= A[static_cast<std::size_t>(sp.perm[t])][static_cast<std::size_t>(j[t])];
                lhs += prod;
            }
            const Int rhs = det * levi_civita(j);
            out.max_deviation = std::max(out.max_deviation, static_cast<double>(std::llabs(lhs - rhs)));
        });
        ++out.samples;
    }
    return out;
}

CheckOutcome check_gkdelta_determinant_form(int m) {
    CheckOutcome out;
    for (int k = 1; k <= std::min(m, 4); ++k)
        for_each_tuple(m, k, [&](const IndexTuple& up) {
            for_each_tuple(m, k, [&](const IndexTuple& low) {
                std::vector<std::vector<Int>> d(static_cast<std::size_t>(k), std::vector<Int>(static_cast<std::size_t>(k)));
                for (int a = 0; a < k; ++a)
                    for (int b = 0; b < k; ++b) d[a][b] = up[b] == low[a] ? 1 : 0;
                out.max_deviation = std::max(out.max_deviation, static_cast<double>(std::llabs(bareiss_det(d) - gkdelta(up, low))));
                ++out.samples;
            });
        });
    return out;
}

CheckOutcome check_wedge_associativity(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int s = 0; s < samples; ++s) {
        const int p = uniform_int(rng, 0, 2), q = uniform_int(rng, 0, 2), r = uniform_int(rng, 0, 2);
        const auto a = random_form(n, std::min(p, n), rng), b = random_form(n, std::min(q, n), rng),
                   c = random_form(n, std::min(r, n), rng);
        out.max_deviation = std::max(out.max_deviation, max_abs_difference(wedge(wedge(a, b), c), wedge(a, wedge(b, c))));
        ++out.samples;
    }
    return out;
}

CheckOutcome check_graded_commutativity(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int p = 0; p <= n; ++p)
        for (int q = 0; p + q <= n; ++q)
            for (int s = 0; s < samples; ++s) {
                const auto a = random_form(n, p, rng), b = random_form(n, q, rng);
                const double sign = ((p * q) & 1) ? -1.0 : 1.0;
                out.max_deviation = std::max(out.max_deviation, max_abs_difference(wedge(a, b), sign * wedge(b, a)));
                ++out.samples;
            }
    return out;
}

CheckOutcome check_interior_nilpotent(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int s = 0; s < samples; ++s) {
        const int k = uniform_int(rng, 2, n);
        const auto a = random_form(n, k, rng);
        const auto v = detail::random_vector(n, rng);
        out.max_deviation = std::max(out.max_deviation, interior(v, interior(v, a)).max_abs());
        ++out.samples;
    }
    return out;
}

CheckOutcome check_interior_antiderivation(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int s = 0; s < samples; ++s) {
        const int p = uniform_int(rng, 1, std::max(1, n / 2)), q = uniform_int(rng, 1, std::max(1, n - p));
        const auto a = random_form(n, p, rng), b = random_form(n, q, rng);
        const auto v = detail::random_vector(n, rng);
        const double sign = (p & 1) ? -1.0 : 1.0;
        const auto lhs = interior(v, wedge(a, b));
        const auto rhs = wedge(interior(v, a), b) + sign * wedge(a, interior(v, b));
        out.max_deviation = std::max(out.max_deviation, max_abs_difference(lhs, rhs));
        ++out.samples;
    }
    return out;
}

CheckOutcome check_pullback_functoriality(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int s = 0; s < samples; ++s) {
        const int p = uniform_int(rng, 1, n), q = uniform_int(rng, 1, n);
        const int k = uniform_int(rng, 0, std::min({n, p, q}));
        const auto a = random_form(n, k, rng);
        const Eigen::MatrixXd L1 = detail::random_matrix(n, p, rng);
        const Eigen::MatrixXd L2 = detail::random_matrix(p, q, rng);
        out.max_deviation =
            std::max(out.max_deviation, max_abs_difference(pullback(L1 * L2, a), pullback(L2, pullback(L1, a))));
        ++out.samples;
    }
    return out;
}

CheckOutcome check_dense_oracle(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    n = std::min(n, 4);
    CheckOutcome out;
    for (int s = 0; s < samples; ++s) {
        const int k = uniform_int(rng, 1, std::min(3, n));
        const int l = uniform_int(rng, 0, std::min(3, n - k));
        const auto a = detail::random_dense_form(n, k, rng);
        const auto b = detail::random_dense_form(n, l, rng);
        const auto w = wedge(a, b);
        double d = dense_diff(to_dense(w), dense_wedge(to_dense(a), k, to_dense(b), l, n));

        std::vector<double> v(static_cast<std::size_t>(n));
        TangentVector tv(n);
        for (int i = 0; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = uniform(rng);
            tv.set(i, v[static_cast<std::size_t>(i)]);
        }
        d = std::max(d, dense_diff(to_dense(interior(tv, a)), dense_interior(v, to_dense(a), k, n)));
        out.max_deviation = std::max(out.max_deviation, d);
        ++out.samples;
    }
    return out;
}

CheckOutcome check_bracket_expansion(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int n = m + 2;
    CheckOutcome out;
    for (int s = 0; s < samples; ++s) {
        std::vector<SparseAltForm> comps;
        for (int c = 0; c < m * m; ++c) comps.push_back(random_form(n, 1, rng, 3));
        const VectorValuedForm w(ValueSpace::matrix(m), comps);
        const auto br = bilinear_combine(Bilinear::Bracket, w, w);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                FormBuilder e(n, 2);
                for (int k = 0; k < m; ++k) e.add_wedge(w[i * m + k], w[k * m + j], 2.0);
                out.max_deviation = std::max(out.max_deviation, max_abs_difference(br[i * m + j], e.build()));
            }
        ++out.samples;
    }
    return out;
}

CheckOutcome check_hodge_defining(int m, const Signature& eta, int pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    IndexTuple top(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) top[i] = i;
    for (int k = 0; k <= m; ++k)
        for (int s = 0; s < pairs; ++s) {
            const auto a = detail::random_dense_form(m, k, rng);
            const auto b = detail::random_dense_form(m, k, rng);
            const auto lhs = wedge(a, hodge_star(b, eta));
            const double expect = eta_hat(a, b, eta);
            out.max_deviation = std::max(out.max_deviation, std::abs(lhs.coefficient(top) - expect));
            ++out.samples;
        }
    return out;
}

CheckOutcome check_double_star(int m, const Signature& eta) {
    CheckOutcome out;
    for (int k = 0; k <= m; ++k) {
        const double sign = (((k * (m - k)) & 1) ? -1.0 : 1.0) * eta.det();
        for (const auto& idx : combinations(m, k)) {
            const auto e = SparseAltForm::from_terms(m, k, std::vector{std::pair{idx, 1.0}});
            out.max_deviation = std::max(out.max_deviation, max_abs_difference(hodge_star(hodge_star(e, eta), eta), sign * e));
            ++out.samples;
        }
    }
    return out;
}

CheckOutcome check_cartan_projectors(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    const Signature eta = Signature::lorentzian(m);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) E(i, i) = eta[i];
    for (int s = 0; s < samples; ++s) {
        const Eigen::MatrixXd A = detail::random_matrix(m, m, rng);
        const Eigen::MatrixXd K = cartan_project(A, CartanPart::K, eta);
        const Eigen::MatrixXd P = cartan_project(A, CartanPart::P, eta);
        double d = (K + P - A).cwiseAbs().maxCoeff();
        d = std::max(d, cartan_project(P, CartanPart::K, eta).cwiseAbs().maxCoeff());
        d = std::max(d, (E * P - (E * P).transpose()).cwiseAbs().maxCoeff());
        d = std::max(d, (E * K + (E * K).transpose()).cwiseAbs().maxCoeff());
        out.max_deviation = std::max(out.max_deviation, d);
        ++out.samples;
    }
    return out;
}

CheckOutcome check_xi_paths(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (const Signature& eta : {Signature::lorentzian(m), Signature::euclidean(m)})
        for (int s = 0; s < samples; ++s) {
            const auto cf = canonical_forms(random_jet_point(m, rng));
            const auto a = xi_r(cf, r, eta);
            const auto b = xi_r_via_hodge(cf, r, eta);
            out.max_deviation = std::max(out.max_deviation, detail::max_abs_difference(a.comps, b.comps));
            ++out.samples;
        }
    return out;
}

CheckOutcome check_xi_pairing(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Signature eta = Signature::lorentzian(m);
    CheckOutcome out;
    std::vector<double> cs;
    int attempts = 0;
    while (static_cast<int>(cs.size()) < samples && attempts < 4 * samples + 4) {
        ++attempts;
        const auto rep = xi_pairing_check(random_jet_point(m, rng), r, eta);
        if (rep.degenerate) continue;  // resample
        out.max_deviation = std::max(out.max_deviation, rep.residual);
        cs.push_back(rep.constant);
    }
    out.samples = static_cast<int>(cs.size());
    const double spread = detail::relative_spread(cs);
    out.max_deviation = std::max(out.max_deviation, spread);
    out.constants.push_back(detail::summarize_constant("xi_pairing", m, r, cs));
    out.detail = "relative spread " + detail::sci(spread);
    return out;
}

}  // namespace lovelock
