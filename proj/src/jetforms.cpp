#include "lovelock/jetforms.hpp"

#include <cmath>
#include <stdexcept>

namespace lovelock {

namespace {

double condition_number(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin == 0.0 ? INFINITY : s(0) / smin;
}

IndexTuple concat(std::span<const int> a, std::span<const int> b) {
    IndexTuple out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

JetPoint make_jet_point(std::vector<double> x, const Eigen::MatrixXd& e, std::vector<double> ejet) {
    const int m = static_cast<int>(e.rows());
    if (m < 1 || e.cols() != m) throw std::domain_error("make_jet_point: frame must be square");
    if (static_cast<int>(x.size()) != m) throw std::domain_error("make_jet_point: x has wrong length");
    if (static_cast<int>(ejet.size()) != m * m * m) throw std::domain_error("make_jet_point: ejet has wrong length");
    if (m + m * m + m * m * m > IndexMask::kCapacity) throw std::domain_error("make_jet_point: m too large for jet space");

    JetPoint jp;
    jp.m = m;
    jp.x = std::move(x);
    jp.frame = e;
    jp.jet = std::move(ejet);
    jp.condition = condition_number(e);
    if (!std::isfinite(jp.condition) || jp.condition > 1e12)
        throw std::domain_error("make_jet_point: frame matrix is singular");
    jp.coframe = e.inverse();
    const double err = (jp.coframe * e - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    if (err > 1e-12 * std::max(1.0, jp.condition))
        throw std::domain_error("make_jet_point: frame inverse inaccurate");
    return jp;
}

JetPoint random_jet_point(int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd e(m, m);
    do {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) e(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * u(rng);
    } while (condition_number(e) > 100.0);
    std::vector<double> ejet(static_cast<std::size_t>(m * m * m));
    for (auto& v : ejet) v = u(rng);
    std::vector<double> x(static_cast<std::size_t>(m));
    for (auto& v : x) v = u(rng);
    return make_jet_point(std::move(x), e, std::move(ejet));
}

JetPoint random_t0_point(int m, std::mt19937_64& rng) { return project_to_T0(random_jet_point(m, rng)); }

CanonicalForms canonical_forms(const JetPoint& jp) {
    const int m = jp.m;
    const JetLayout L = jp.layout();
    const int n = L.dim();
    const auto& ei = jp.coframe;

    CanonicalForms cf;
    cf.m = m;

    // d(e^k_mu) = -e^k_nu e^l_mu de^nu_l
    std::vector<SparseAltForm> dinv;
    for (int k = 0; k < m; ++k)
        for (int mu = 0; mu < m; ++mu) {
            FormBuilder b(n, 1);
            for (int nu = 0; nu < m; ++nu)
                for (int l = 0; l < m; ++l) b.add(IndexMask::bit(L.de(nu, l)), -ei(k, nu) * ei(l, mu));
            dinv.push_back(b.build());
        }
    auto dx = [&](int mu) { return SparseAltForm::basis_covector(n, L.dx(mu)); };
    auto de = [&](int mu, int k) { return SparseAltForm::basis_covector(n, L.de(mu, k)); };
    auto djet = [&](int mu, int k, int s) { return SparseAltForm::basis_covector(n, L.djet(mu, k, s)); };

    for (int k = 0; k < m; ++k) {
        FormBuilder th(n, 1), dth(n, 2);
        for (int mu = 0; mu < m; ++mu) {
            th.add(IndexMask::bit(L.dx(mu)), ei(k, mu));
            dth.add_wedge(dinv[k * m + mu], dx(mu));
        }
        cf.theta.push_back(th.build());
        cf.dtheta.push_back(dth.build());
    }

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            FormBuilder w(n, 1), dw(n, 2);
            for (int mu = 0; mu < m; ++mu) {
                w.add(IndexMask::bit(L.de(mu, j)), ei(i, mu));
                dw.add_wedge(dinv[i * m + mu], de(mu, j));
                for (int s = 0; s < m; ++s) {
                    w.add(IndexMask::bit(L.dx(s)), -ei(i, mu) * jp.ejet(mu, j, s));
                    dw.add_wedge(dinv[i * m + mu], dx(s), -jp.ejet(mu, j, s));
                    dw.add_wedge(djet(mu, j, s), dx(s), -ei(i, mu));
                }
            }
            cf.omega.push_back(w.build());
            cf.domega.push_back(dw.build());
        }

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            FormBuilder c(n, 2);
            c.add(cf.dw(i, j));
            for (int k = 0; k < m; ++k) c.add_wedge(cf.w(i, k), cf.w(k, j));
            cf.curvature.push_back(c.build());
        }
    for (int k = 0; k < m; ++k) {
        FormBuilder t(n, 2);
        t.add(cf.dtheta[k]);
        for (int i = 0; i < m; ++i) t.add_wedge(cf.w(k, i), cf.theta[i]);
        cf.torsion.push_back(t.build());
    }
    return cf;
}

CanonicalForms pullback(const Eigen::MatrixXd& L, const CanonicalForms& cf) {
    CanonicalForms out;
    out.m = cf.m;
    auto pull = [&](const std::vector<SparseAltForm>& src, std::vector<SparseAltForm>& dst) {
        dst.reserve(src.size());
        for (const auto& f : src) dst.push_back(pullback(L, f));
    };
    pull(cf.theta, out.theta);
    pull(cf.dtheta, out.dtheta);
    pull(cf.omega, out.omega);
    pull(cf.domega, out.domega);
    pull(cf.curvature, out.curvature);
    pull(cf.torsion, out.torsion);
    return out;
}

SparseAltForm torsion_closed_form(const JetPoint& jp, int k) {
    const int m = jp.m;
    const JetLayout L = jp.layout();
    FormBuilder b(L.dim(), 2);
    for (int s = 0; s < m; ++s)
        for (int nu = 0; nu < m; ++nu) {
            if (s == nu) continue;
            double c = 0.0;
            for (int mu = 0; mu < m; ++mu)
                for (int i = 0; i < m; ++i)
                    c += jp.coframe(k, mu) *
                         (jp.ejet(mu, i, nu) * jp.coframe(i, s) - jp.ejet(mu, i, s) * jp.coframe(i, nu));
            // dx^s ^ dx^nu
            const double sign = s < nu ? 1.0 : -1.0;
            b.add(IndexMask::bit(s) | IndexMask::bit(nu), 0.5 * sign * c);
        }
    return b.build();
}

std::vector<double> torsion_zero_residual(const JetPoint& jp) {
    const int m = jp.m;
    std::vector<double> res(static_cast<std::size_t>(m * m * m), 0.0);
    for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu)
            for (int s = 0; s < m; ++s) {
                double c = 0.0;
                for (int i = 0; i < m; ++i)
                    c += jp.ejet(mu, i, nu) * jp.coframe(i, s) - jp.ejet(mu, i, s) * jp.coframe(i, nu);
                res[static_cast<std::size_t>((mu * m + nu) * m + s)] = c;
            }
    return res;
}

double torsion_zero_norm(const JetPoint& jp) {
    double n = 0.0;
    for (double v : torsion_zero_residual(jp)) n = std::max(n, std::abs(v));
    return n;
}

std::vector<double> jet_connection(const JetPoint& jp) {
    const int m = jp.m;
    std::vector<double> gamma(static_cast<std::size_t>(m * m * m), 0.0);
    for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu)
            for (int s = 0; s < m; ++s) {
                double c = 0.0;
                for (int k = 0; k < m; ++k) c -= jp.coframe(k, nu) * jp.ejet(mu, k, s);
                gamma[static_cast<std::size_t>((mu * m + nu) * m + s)] = c;
            }
    return gamma;
}

JetPoint project_to_T0(const JetPoint& jp) {
    const int m = jp.m;
    const auto gamma = jet_connection(jp);
    auto g = [&](int mu, int nu, int s) { return gamma[static_cast<std::size_t>((mu * m + nu) * m + s)]; };
    std::vector<double> ejet(static_cast<std::size_t>(m * m * m), 0.0);
    for (int mu = 0; mu < m; ++mu)
        for (int k = 0; k < m; ++k)
            for (int s = 0; s < m; ++s) {
                double c = 0.0;
                for (int nu = 0; nu < m; ++nu) c -= jp.frame(nu, k) * 0.5 * (g(mu, nu, s) + g(mu, s, nu));
                ejet[static_cast<std::size_t>((mu * m + k) * m + s)] = c;
            }
    return make_jet_point(jp.x, jp.frame, std::move(ejet));
}

Eigen::MatrixXd t0_tangent_map(const JetPoint& jp) {
    const int m = jp.m;
    const JetLayout L = jp.layout();
    const int pairs = m * (m + 1) / 2;
    const int p = m + m * m + m * pairs;
    auto pair_index = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        return a * m - a * (a - 1) / 2 + (b - a);
    };
    auto gamma_col = [&](int mu, int nu, int s) { return m + m * m + mu * pairs + pair_index(nu, s); };

    const auto gamma = jet_connection(jp);
    auto g = [&](int mu, int nu, int s) { return gamma[static_cast<std::size_t>((mu * m + nu) * m + s)]; };

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(L.dim(), p);
    for (int mu = 0; mu < m; ++mu) T(L.dx(mu), mu) = 1.0;
    for (int mu = 0; mu < m; ++mu)
        for (int k = 0; k < m; ++k) T(L.de(mu, k), m + mu * m + k) = 1.0;
    // e^mu_{k s} = -e^nu_k Gamma^mu_{nu s}
    for (int mu = 0; mu < m; ++mu)
        for (int k = 0; k < m; ++k)
            for (int s = 0; s < m; ++s) {
                const int row = L.djet(mu, k, s);
                for (int nu = 0; nu < m; ++nu) {
                    T(row, m + nu * m + k) += -g(mu, nu, s);
                    T(row, gamma_col(mu, nu, s)) += -jp.frame(nu, k);
                }
            }
    return T;
}

SparseAltForm sparling(std::span<const SparseAltForm> theta, std::span<const int> indices) {
    const int m = static_cast<int>(theta.size());
    const int p = static_cast<int>(indices.size());
    if (p > m) throw std::domain_error("sparling: more indices than dimensions");
    for (int i : indices)
        if (i < 0 || i >= m) throw std::domain_error("sparling: index out of range");
    const int n = theta[0].space_dim();
    const int q = m - p;
    FormBuilder acc(n, q);
    for_each_tuple(m, q, [&](const IndexTuple& K) {
        const int eps = levi_civita(concat(indices, K));
        if (eps == 0) return;
        SparseAltForm w = SparseAltForm::scalar(n, static_cast<double>(eps));
        for (int k : K) w = wedge(w, theta[k]);
        acc.add(w);
    });
    auto out = acc.build();
    return out * (1.0 / static_cast<double>(factorial(q)));
}

SparseAltForm sparling(const JetPoint& jp, std::span<const int> indices) {
    return sparling(canonical_forms(jp).theta, indices);
}

SparseAltForm sparling_via_contraction(const JetPoint& jp, std::span<const int> indices) {
    const int m = jp.m;
    const JetLayout L = jp.layout();
    const auto cf = canonical_forms(jp);

    // Solve theta^j(X_i) = delta^j_i for the horizontal components of X_i.
    Eigen::MatrixXd theta_matrix(m, m);
    for (int j = 0; j < m; ++j)
        for (int mu = 0; mu < m; ++mu) theta_matrix(j, mu) = cf.theta[j].coefficient(std::array{L.dx(mu)});
    Eigen::FullPivLU<Eigen::MatrixXd> lu(theta_matrix);
    if (!lu.isInvertible()) throw std::domain_error("sparling_via_contraction: coframe matrix is singular");
    const Eigen::MatrixXd X = lu.solve(Eigen::MatrixXd::Identity(m, m));

    SparseAltForm form = wedge_all(cf.theta, L.dim());
    for (int i : indices) {
        TangentVector v(L.dim());
        for (int mu = 0; mu < m; ++mu) v.set(L.dx(mu), X(mu, i));
        form = interior(v, form);
    }
    return form;
}

SparlingTable::SparlingTable(std::span<const SparseAltForm> theta, std::span<const SparseAltForm> dtheta)
    : m_(static_cast<int>(theta.size())), space_dim_(theta[0].space_dim()) {
    const int subsets = 1 << m_;
    forms_.resize(static_cast<std::size_t>(subsets));
    diffs_.resize(static_cast<std::size_t>(subsets));
    for (int s = 0; s < subsets; ++s) {
        IndexTuple I;
        for (int i = 0; i < m_; ++i)
            if (s & (1 << i)) I.push_back(i);
        forms_[s] = sparling(theta, I);

        // Leibniz on the same defining sum: d(theta^{k1} ^ ... ) = sum_t (-1)^t ... ^ dtheta^{kt} ^ ...
        const int q = m_ - static_cast<int>(I.size());
        if (dtheta.empty() || q + 1 > space_dim_) {
            diffs_[s] = SparseAltForm(space_dim_, 0);
            continue;
        }
        FormBuilder acc(space_dim_, q + 1);
        for_each_tuple(m_, q, [&](const IndexTuple& K) {
            const int eps = levi_civita(concat(I, K));
            if (eps == 0) return;
            for (int t = 0; t < q; ++t) {
                SparseAltForm w = SparseAltForm::scalar(space_dim_, (t & 1) ? -eps : eps);
                for (int u = 0; u < q; ++u) w = wedge(w, u == t ? dtheta[K[u]] : theta[K[u]]);
                acc.add(w);
            }
        });
        diffs_[s] = acc.build() * (1.0 / static_cast<double>(factorial(q)));
    }
}

SparseAltForm SparlingTable::form(std::span<const int> indices) const {
    const int s = sort_sign(indices);
    const int q = m_ - static_cast<int>(indices.size());
    if (s == 0) return SparseAltForm(space_dim_, q);
    int bits = 0;
    for (int i : indices) bits |= 1 << i;
    return static_cast<double>(s) * forms_[static_cast<std::size_t>(bits)];
}

SparseAltForm SparlingTable::differential(std::span<const int> indices) const {
    const int s = sort_sign(indices);
    const int q = m_ - static_cast<int>(indices.size());
    if (s == 0) return SparseAltForm(space_dim_, std::min(q + 1, space_dim_));
    int bits = 0;
    for (int i : indices) bits |= 1 << i;
    return static_cast<double>(s) * diffs_[static_cast<std::size_t>(bits)];
}

TangentVector vertical_lift_vector(const JetPoint& jp, int r, int s, int t) {
    const int m = jp.m;
    if (r < 0 || r >= m || s < 0 || s >= m || t < 0 || t >= m)
        throw std::domain_error("vertical_lift_vector: index out of range");
    const JetLayout L = jp.layout();
    TangentVector v(L.dim());
    for (int mu = 0; mu < m; ++mu)
        for (int sigma = 0; sigma < m; ++sigma) v.set(L.djet(mu, s, sigma), jp.coframe(r, sigma) * jp.frame(mu, t));
    return v;
}

LagrangianForm lagrangian_from_blocks(const CanonicalForms& cf, int r, const Signature& eta) {
    const int m = cf.m;
    const int n = cf.theta[0].space_dim();
    if (2 * r > m) return {SparseAltForm(n, 0), true};
    SparlingTable table(cf.theta, {});

    FormBuilder acc(n, m);
    for_each_tuple(m, r, [&](const IndexTuple& I) {
        for_each_tuple(m, r, [&](const IndexTuple& J) {
            const IndexTuple IJ = concat(I, J);
            if (sort_sign(IJ) == 0) return;
            SparseAltForm w = table.form(IJ);
            for (int t = 0; t < r; ++t) w = wedge(w, eta[J[t]] * cf.curv(I[t], J[t]));
            acc.add(w);
        });
    });
    return {acc.build(), false};
}

LagrangianForm lovelock_lagrangian_form(const JetPoint& jp, int r, const Signature& eta) {
    if (eta.m() != jp.m) throw std::domain_error("lovelock_lagrangian_form: signature dimension mismatch");
    if (2 * r > jp.m) return {SparseAltForm(jp.layout().dim(), 0), true};
    return lagrangian_from_blocks(canonical_forms(jp), r, eta);
}

DLambdaReport dlambda_check(const JetPoint& jp, int r, const Signature& eta) {
    const int m = jp.m;
    if (r < 1 || 2 * r > m) throw std::domain_error("dlambda_check: need 1 <= r and 2r <= m");
    if (eta.m() != m) throw std::domain_error("dlambda_check: signature dimension mismatch");
    const double off = torsion_zero_norm(jp);
    if (off >= 1e-10) throw std::domain_error("dlambda_check: jet point is not on the torsion-free submanifold");

    // Everything below lives on the chart of the torsion-free submanifold.
    const CanonicalForms cf = pullback(t0_tangent_map(jp), canonical_forms(jp));
    const int n = cf.theta[0].space_dim();
    const SparlingTable table(cf.theta, cf.dtheta);

    // Omega^{ab} = eta^{bb} Omega^a_b and its differential from d(omega ^ omega).
    std::vector<SparseAltForm> up(static_cast<std::size_t>(m * m)), dup(static_cast<std::size_t>(m * m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            FormBuilder d(n, 3);
            for (int k = 0; k < m; ++k) {
                d.add_wedge(cf.dw(a, k), cf.w(k, b));
                d.add_wedge(cf.w(a, k), cf.dw(k, b), -1.0);
            }
            up[a * m + b] = eta[b] * cf.curv(a, b);
            dup[a * m + b] = eta[b] * d.build();
        }
    // (omega_p)^i_j = 1/2 (omega^i_j + eta_j eta_i omega^j_i)
    std::vector<SparseAltForm> wp(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) wp[i * m + j] = 0.5 * (cf.w(i, j) + (eta[i] * eta[j]) * cf.w(j, i));
    FormBuilder trace_b(n, 1);
    for (int l = 0; l < m; ++l) trace_b.add(wp[l * m + l]);
    const SparseAltForm wp_trace = trace_b.build();

    const double sign_theta = ((m - 2 * r) & 1) ? -1.0 : 1.0;
    FormBuilder lhs(n, m + 1), rhs(n, m + 1);
    for_each_tuple(m, r, [&](const IndexTuple& I) {
        for_each_tuple(m, r, [&](const IndexTuple& J) {
            const IndexTuple IJ = concat(I, J);
            if (sort_sign(IJ) == 0) return;
            const SparseAltForm th = table.form(IJ);

            // Omega^{I'J'} (all factors but the first) and the full product.
            SparseAltForm tail = SparseAltForm::scalar(n, 1.0);
            for (int t = 1; t < r; ++t) tail = wedge(tail, up[I[t] * m + J[t]]);
            const SparseAltForm full = wedge(up[I[0] * m + J[0]], tail);

            lhs.add_wedge(table.differential(IJ), full);
            SparseAltForm dprod(n, std::min(n, 2 * r + 1));
            {
                FormBuilder dp(n, 2 * r + 1);
                for (int t = 0; t < r; ++t) {
                    SparseAltForm w = SparseAltForm::scalar(n, 1.0);
                    for (int u = 0; u < r; ++u) w = wedge(w, u == t ? dup[I[u] * m + J[u]] : up[I[u] * m + J[u]]);
                    dp.add(w);
                }
                dprod = dp.build();
            }
            lhs.add_wedge(th, dprod, sign_theta);

            // 2 [ r eta^{j1 p} (w_p)^q_p ^ theta_IJ - 1/2 eta^{j1 q} (w_p)^l_l ^ theta_IJ ] ^ Omega^{i1}_q ^ Omega^{I'J'}
            const int j1 = J[0], i1 = I[0];
            for (int q = 0; q < m; ++q) {
                FormBuilder bracket(n, m - 2 * r + 1);
                bracket.add_wedge(wp[q * m + j1], th, 2.0 * r * eta[j1]);
                if (q == j1) bracket.add_wedge(wp_trace, th, -1.0 * eta[j1]);
                const SparseAltForm br = bracket.build();
                if (br.is_zero()) continue;
                rhs.add(wedge(wedge(br, cf.curv(i1, q)), tail));
            }
        });
    });
    const SparseAltForm L = lhs.build();
    const SparseAltForm R = rhs.build();

    DLambdaReport rep;
    rep.max_deviation = max_abs_difference(L, R);
    rep.lhs_norm = L.max_abs();
    rep.rhs_norm = R.max_abs();
    // Least-squares factor L ~ c R over the union of coefficients.
    double lr = 0.0, rr = 0.0;
    for (const auto& t : R.terms()) {
        lr += L.coefficient(t.key) * t.coeff;
        rr += t.coeff * t.coeff;
    }
    rep.ratio = rr > 0.0 ? lr / rr : 0.0;
    rep.ratio_residual = max_abs_difference(L, rep.ratio * R);
    return rep;
}

}  // namespace lovelock
