#include "lovelock/valg.hpp"

#include <cmath>
#include <stdexcept>

namespace lovelock {

namespace {

IndexTuple concat(std::span<const int> a, std::span<const int> b) {
    IndexTuple out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

IndexTuple sorted_copy(IndexTuple t) {
    std::sort(t.begin(), t.end());
    return t;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

}  // namespace

double eta_hat(const SparseAltForm& alpha, const SparseAltForm& beta, const Signature& eta) {
    require(alpha.degree() == beta.degree(), "eta_hat: degree mismatch");
    require(alpha.space_dim() == eta.m() && beta.space_dim() == eta.m(), "eta_hat: dimension mismatch");
    const int k = alpha.degree();
    double acc = 0.0;
    for (const auto& ta : alpha.terms())
        for (const auto& tb : beta.terms()) {
            if (k == 0) {
                acc += ta.coeff * tb.coeff;
                continue;
            }
            const IndexTuple a = ta.key.indices(), b = tb.key.indices();
            Eigen::MatrixXd gram(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) gram(i, j) = a[i] == b[j] ? eta[a[i]] : 0.0;
            acc += ta.coeff * tb.coeff * gram.determinant();
        }
    return acc;
}

SparseAltForm hodge_star(const SparseAltForm& beta, const Signature& eta) {
    const int m = eta.m();
    require(beta.space_dim() == m, "hodge_star: dimension mismatch");
    const int k = beta.degree();
    const int q = m - k;
    const auto perms = permutations(k);
    const double norm = 1.0 / static_cast<double>(factorial(k) * factorial(q));

    // beta^{i1..ik} is the totally antisymmetric component array: canonical coefficient / k!.
    FormBuilder out(m, q);
    for (const auto& t : beta.terms()) {
        const IndexTuple base = t.key.indices();
        for (const auto& sp : perms) {
            IndexTuple i(static_cast<std::size_t>(k));
            double etas = 1.0;
            for (int a = 0; a < k; ++a) {
                i[a] = base[sp.perm[a]];
                etas *= eta[i[a]];
            }
            for_each_tuple(m, q, [&](const IndexTuple& rest) {
                const int eps = levi_civita(concat(i, rest));
                if (eps == 0) return;
                const int s = sort_sign(rest);
                out.add(IndexMask::from_indices(rest), norm * sp.sign * t.coeff * etas * eps * s);
            });
        }
    }
    return out.build();
}

Eigen::MatrixXd hodge_matrix(int k, const Signature& eta) {
    const int m = eta.m();
    const auto src = combinations(m, k);
    const auto dst = combinations(m, m - k);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
    for (std::size_t c = 0; c < src.size(); ++c) {
        const auto star = hodge_star(SparseAltForm::from_terms(m, k, std::vector{std::pair{src[c], 1.0}}), eta);
        for (const auto& t : star.terms()) H(combination_rank(t.key.indices(), m), static_cast<Eigen::Index>(c)) = t.coeff;
    }
    return H;
}

Eigen::MatrixXd cartan_project(const Eigen::MatrixXd& a, CartanPart part, const Signature& eta) {
    require(a.rows() == eta.m() && a.cols() == eta.m(), "cartan_project: shape mismatch");
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(eta.m(), eta.m());
    for (int i = 0; i < eta.m(); ++i) E(i, i) = eta[i];
    const Eigen::MatrixXd flipped = E * a.transpose() * E;
    return part == CartanPart::K ? Eigen::MatrixXd(0.5 * (a - flipped)) : Eigen::MatrixXd(0.5 * (a + flipped));
}

VectorValuedForm cartan_project(const VectorValuedForm& a, CartanPart part, const Signature& eta) {
    require(a.space.kind == ValueKind::Matrix && a.space.m == eta.m(), "cartan_project: need a gl(m)-valued form");
    const int m = eta.m();
    const double s = part == CartanPart::K ? -1.0 : 1.0;
    std::vector<SparseAltForm> out;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.push_back(0.5 * (a[i * m + j] + (s * eta[j] * eta[i]) * a[j * m + i]));
    return VectorValuedForm(a.space, std::move(out));
}

VectorValuedForm theta_power(std::span<const SparseAltForm> theta, int k) {
    const int m = static_cast<int>(theta.size());
    const int n = theta[0].space_dim();
    std::vector<SparseAltForm> out;
    for (const auto& i : combinations(m, k)) {
        SparseAltForm w = SparseAltForm::scalar(n, 1.0);
        for (int a : i) w = wedge(w, theta[a]);
        out.push_back(std::move(w));
    }
    return VectorValuedForm(ValueSpace::multivector(m, k), std::move(out));
}

Eigen::MatrixXd ar_map(int m, int r, const Signature& eta, bool flat_on_last) {
    require(2 * r <= m && r >= 0, "ar_map: need 2r <= m");
    const auto src = combinations(m, 2 * r);
    const int nb = static_cast<int>(binomial(m, r));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nb * nb, static_cast<Eigen::Index>(src.size()));
    const auto perms = permutations(2 * r);
    const double norm = 1.0 / static_cast<double>(factorial(2 * r));
    for (std::size_t c = 0; c < src.size(); ++c) {
        const auto& J = src[c];
        for (const auto& sp : perms) {
            IndexTuple first(static_cast<std::size_t>(r)), last(static_cast<std::size_t>(r));
            for (int t = 0; t < r; ++t) {
                first[t] = J[sp.perm[t]];
                last[t] = J[sp.perm[r + t]];
            }
            // vectors (x) flattened covectors
            const IndexTuple& vec = flat_on_last ? first : last;
            const IndexTuple& cov = flat_on_last ? last : first;
            double etas = 1.0;
            for (int a : cov) etas *= eta[a];
            const int row = combination_rank(sorted_copy(vec), m) * nb + combination_rank(sorted_copy(cov), m);
            A(row, static_cast<Eigen::Index>(c)) += norm * sp.sign * etas * sort_sign(vec) * sort_sign(cov);
        }
    }
    return A;
}

VectorValuedForm xi_r(const CanonicalForms& cf, int r, const Signature& eta) {
    const int m = cf.m;
    require(2 * r <= m, "xi_r: need 2r <= m");
    require(eta.m() == m, "xi_r: signature dimension mismatch");
    const int n = cf.theta[0].space_dim();
    const int nb = static_cast<int>(binomial(m, r));
    const SparlingTable table(cf.theta, {});
    std::vector<FormBuilder> comps(static_cast<std::size_t>(nb * nb), FormBuilder(n, m - 2 * r));
    for_each_tuple(m, 2 * r, [&](const IndexTuple& i) {
        if (sort_sign(i) == 0) return;
        const IndexTuple low(i.begin(), i.begin() + r);
        const IndexTuple high(i.begin() + r, i.end());
        double etas = eta.det() / static_cast<double>(factorial(2 * r));
        for (int a : high) etas *= eta[a];  // eta^{i j} diagonal: j = i
        const double s = etas * sort_sign(high) * sort_sign(low);
        const int row = combination_rank(sorted_copy(high), m) * nb + combination_rank(sorted_copy(low), m);
        comps[static_cast<std::size_t>(row)].add(table.form(i), s);
    });
    std::vector<SparseAltForm> out;
    for (auto& c : comps) out.push_back(c.build());
    return VectorValuedForm(ValueSpace::end_dual(m, r), std::move(out));
}

VectorValuedForm xi_r(const JetPoint& jp, int r, const Signature& eta) { return xi_r(canonical_forms(jp), r, eta); }

VectorValuedForm xi_r_via_hodge(const CanonicalForms& cf, int r, const Signature& eta, bool flat_on_last) {
    const int m = cf.m;
    require(2 * r <= m, "xi_r_via_hodge: need 2r <= m");
    const int k = m - 2 * r;
    const VectorValuedForm power = theta_power(cf.theta, k);
    const VectorValuedForm starred = apply_linear(hodge_matrix(k, eta), ValueSpace::multivector(m, 2 * r), power);
    return apply_linear(ar_map(m, r, eta, flat_on_last), ValueSpace::end_dual(m, r), starred);
}

VectorValuedForm curvature_power(const CanonicalForms& cf, int r) {
    const int m = cf.m;
    const int n = cf.theta[0].space_dim();
    const auto basis = combinations(m, r);
    const int nb = static_cast<int>(basis.size());
    const auto perms = permutations(r);
    const double norm = 1.0 / static_cast<double>(factorial(r));
    const int deg = std::min(2 * r, n);
    std::vector<FormBuilder> comps(static_cast<std::size_t>(nb * nb), FormBuilder(n, deg));
    // F(e_C) = 1/r! sum_sigma sgn(sigma) sum_a Omega^{a1}_{c_sigma1} ^ ... (x) e_{a1} ^ ... ^ e_{ar}
    for (int c = 0; c < nb; ++c) {
        const auto& C = basis[c];
        for (const auto& sp : perms)
            for_each_tuple(m, r, [&](const IndexTuple& a) {
                const int s = sort_sign(a);
                if (s == 0) return;
                SparseAltForm w = SparseAltForm::scalar(n, norm * sp.sign * s);
                for (int t = 0; t < r; ++t) w = wedge(w, cf.curv(a[t], C[sp.perm[t]]));
                comps[static_cast<std::size_t>(c * nb + combination_rank(sorted_copy(a), m))].add(w);
            });
    }
    std::vector<SparseAltForm> out;
    for (auto& f : comps) out.push_back(f.build());
    return VectorValuedForm(ValueSpace::end_multivector(m, r), std::move(out));
}

XiPairing xi_pairing_check(const JetPoint& jp, int r, const Signature& eta) {
    require(2 * r <= jp.m, "xi_pairing_check: need 2r <= m");
    const CanonicalForms cf = canonical_forms(jp);
    const SparseAltForm pairing = bilinear_combine(Bilinear::Pairing, xi_r(cf, r, eta), curvature_power(cf, r))[0];
    const SparseAltForm lambda = lagrangian_from_blocks(cf, r, eta).form;

    XiPairing out;
    out.lambda_norm = lambda.max_abs();
    if (out.lambda_norm == 0.0) {
        out.degenerate = true;
        out.residual = pairing.max_abs();
        return out;
    }
    double pl = 0.0, ll = 0.0;
    for (const auto& t : lambda.terms()) {
        pl += pairing.coefficient(t.key) * t.coeff;
        ll += t.coeff * t.coeff;
    }
    out.constant = pl / ll;
    out.residual = max_abs_difference(pairing, out.constant * lambda) / std::max(1.0, pairing.max_abs());
    return out;
}

}  // namespace lovelock
