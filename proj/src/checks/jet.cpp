#include <cmath>
#include <string>
#include <vector>

#include "lovelock/checks.hpp"
#include "lovelock/gravity.hpp"
#include "lovelock/jetforms.hpp"
#include "util.hpp"

namespace lovelock {

namespace {

double sign_of(int e) { return (e & 1) ? -1.0 : 1.0; }

IndexTuple join(const IndexTuple& a, const IndexTuple& b) {
    IndexTuple out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// Ordered tuples of distinct entries.
std::vector<IndexTuple> distinct_tuples(int m, int len) {
    std::vector<IndexTuple> out;
    for_each_tuple(m, len, [&](const IndexTuple& t) {
        if (sort_sign(t) != 0) out.push_back(t);
    });
    return out;
}

SparseAltForm theta_product(const CanonicalForms& cf, const IndexTuple& idx) {
    SparseAltForm w = SparseAltForm::scalar(cf.theta[0].space_dim(), 1.0);
    for (int i : idx) w = wedge(w, cf.theta[static_cast<std::size_t>(i)]);
    return w;
}

}  // namespace

CheckOutcome check_sparling_item1(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto cf = canonical_forms(random_jet_point(m, rng));
        const SparlingTable table(cf.theta, {});
        const int dim = cf.theta[0].space_dim();
        for (int s = 1; s <= m; ++s)
            for (int r = 1; r <= s; ++r) {
                const double pre = sign_of(r * (s - r)) / static_cast<double>(factorial(s - r));
                for_each_tuple(m, r, [&](const IndexTuple& I) {
                    const SparseAltForm prod = theta_product(cf, I);
                    for (const auto& J : combinations(m, s)) {
                        const SparseAltForm lhs = wedge(prod, table.form(J));
                        FormBuilder rhs(dim, m - s + r);
                        for_each_tuple(m, s - r, [&](const IndexTuple& K) {
                            const int d = gkdelta(join(I, K), J);
                            if (d) rhs.add(table.form(K), pre * d);
                        });
                        out.max_deviation = std::max(out.max_deviation, max_abs_difference(lhs, rhs.build()));
                    }
                });
            }
        ++out.samples;
    }
    return out;
}

CheckOutcome check_sparling_item2(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto cf = canonical_forms(random_jet_point(m, rng));
        const SparlingTable table(cf.theta, {});
        const int dim = cf.theta[0].space_dim();
        for (int p = 1; p <= m; ++p)
            for (const auto& I : distinct_tuples(m, p))
                for (int k = 0; k < m; ++k) {
                    const SparseAltForm lhs = wedge(cf.theta[static_cast<std::size_t>(k)], table.form(I));
                    FormBuilder rhs(dim, m - p + 1);
                    for (int r = 0; r < p; ++r) {
                        if (I[r] != k) continue;
                        IndexTuple hat = I;
                        hat.erase(hat.begin() + r);
                        rhs.add(table.form(hat), sign_of(p + r + 1));  // (-1)^{p+r} with r 1-based
                    }
                    out.max_deviation = std::max(out.max_deviation, max_abs_difference(lhs, rhs.build()));
                }
        ++out.samples;
    }
    return out;
}

CheckOutcome check_sparling_item3(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto cf = canonical_forms(random_jet_point(m, rng));
        const SparlingTable table(cf.theta, cf.dtheta);
        const int dim = cf.theta[0].space_dim();
        for (int p = 0; p <= m; ++p)
            for (const auto& I : distinct_tuples(m, p)) {
                FormBuilder rhs(dim, m - p + 1);
                for (int l = 0; l < m; ++l) {
                    IndexTuple Il = I;
                    Il.push_back(l);
                    if (p < m) rhs.add_wedge(cf.torsion[static_cast<std::size_t>(l)], table.form(Il));
                    for (int r = 0; r < p; ++r) {
                        IndexTuple hat = I;
                        hat.erase(hat.begin() + r);
                        hat.push_back(l);
                        rhs.add_wedge(cf.w(l, I[r]), table.form(hat), sign_of(p + r + 1));
                    }
                    rhs.add_wedge(cf.w(l, l), table.form(I), -1.0);
                }
                out.max_deviation = std::max(out.max_deviation, max_abs_difference(table.differential(I), rhs.build()));
            }
        ++out.samples;
    }
    return out;
}

CheckOutcome check_sparling_contraction(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto jp = random_jet_point(m, rng);
        for (int p = 0; p <= m; ++p)
            for (const auto& I : distinct_tuples(m, p))
                out.max_deviation = std::max(out.max_deviation, max_abs_difference(sparling(jp, I), sparling_via_contraction(jp, I)));
        ++out.samples;
    }
    return out;
}

std::vector<CheckOutcome> check_vertical_lift(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckOutcome> out(3);
    double opposite = 0.0;
    for (int n = 0; n < samples; ++n) {
        const auto jp = random_jet_point(m, rng);
        const auto cf = canonical_forms(jp);
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s)
                for (int t = 0; t < m; ++t) {
                    const TangentVector v = vertical_lift_vector(jp, r, s, t);
                    for (int k = 0; k < m; ++k) {
                        out[0].max_deviation = std::max(out[0].max_deviation, interior(v, cf.theta[static_cast<std::size_t>(k)]).max_abs());
                        for (int l = 0; l < m; ++l) {
                            out[1].max_deviation = std::max(out[1].max_deviation, interior(v, cf.w(k, l)).max_abs());
                            const SparseAltForm c = interior(v, cf.curv(k, l));
                            const double dd = (k == t && s == l) ? 1.0 : 0.0;
                            const SparseAltForm expect = dd * cf.theta[static_cast<std::size_t>(r)];
                            out[2].max_deviation = std::max(out[2].max_deviation, max_abs_difference(c, expect));
                            opposite = std::max(opposite, max_abs_difference(c, -1.0 * expect));
                        }
                    }
                }
        for (auto& o : out) ++o.samples;
    }
    out[2].detail = "deviation with the opposite sign " + detail::sci(opposite);
    return out;
}

CheckOutcome check_torsion_closed_form(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto jp = random_jet_point(m, rng);
        const auto cf = canonical_forms(jp);
        for (int k = 0; k < m; ++k)
            out.max_deviation = std::max(out.max_deviation, max_abs_difference(cf.torsion[static_cast<std::size_t>(k)], torsion_closed_form(jp, k)));
        ++out.samples;
    }
    return out;
}

CheckOutcome check_structure_equation(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto cf = canonical_forms(random_jet_point(m, rng));
        const int dim = cf.theta[0].space_dim();
        for (int k = 0; k < m; ++k) {
            // dT = d omega ^ theta - omega ^ d theta, then the structure equation.
            FormBuilder res(dim, 3);
            for (int l = 0; l < m; ++l) {
                res.add_wedge(cf.dw(k, l), cf.theta[static_cast<std::size_t>(l)]);
                res.add_wedge(cf.w(k, l), cf.dtheta[static_cast<std::size_t>(l)], -1.0);
                res.add_wedge(cf.w(k, l), cf.torsion[static_cast<std::size_t>(l)]);
                res.add_wedge(cf.curv(k, l), cf.theta[static_cast<std::size_t>(l)], -1.0);
            }
            out.max_deviation = std::max(out.max_deviation, res.build().max_abs());
        }
        ++out.samples;
    }
    return out;
}

CheckOutcome check_t0_projection(int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CheckOutcome out;
    for (int n = 0; n < samples; ++n) {
        const auto p = project_to_T0(random_jet_point(m, rng));
        const auto q = project_to_T0(p);
        double d = torsion_zero_norm(p);
        for (std::size_t i = 0; i < p.jet.size(); ++i) d = std::max(d, std::abs(p.jet[i] - q.jet[i]));
        for (const auto& t : canonical_forms(p).torsion) d = std::max(d, t.max_abs());
        out.max_deviation = std::max(out.max_deviation, d);
        ++out.samples;
    }
    return out;
}

CheckOutcome check_dlambda(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Signature eta = Signature::lorentzian(m);
    CheckOutcome out;
    double ratio_min = 1e300, ratio_max = -1e300;
    for (int n = 0; n < samples; ++n) {
        const auto rep = dlambda_check(random_t0_point(m, rng), r, eta);
        out.max_deviation = std::max(out.max_deviation, rep.max_deviation);
        ratio_min = std::min(ratio_min, rep.ratio);
        ratio_max = std::max(ratio_max, rep.ratio);
        ++out.samples;
    }
    out.detail = "lhs/rhs fitted ratio in [" + detail::sci(ratio_min) + ", " + detail::sci(ratio_max) + "]";
    return out;
}

CheckOutcome check_omega_swap(int m, int r, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Signature eta = Signature::lorentzian(m);
    CheckOutcome out;
    double premise_max = 0.0;
    int skipped = 0;
    for (int n = 0; n < samples; ++n) {
        const auto draw = detail::random_metric(m, eta, rng);
        const auto ms = draw.source->sample(draw.x);
        const auto cd = curvature(ms);
        const auto vb = vielbein_from_metric(ms.g, eta);
        const auto theta = base_coframe(vb);
        const auto up = base_curvature_upper(vb, cd);
        auto mixed = [&](int q, int l) { return eta[l] * up[static_cast<std::size_t>(q * m + l)]; };  // Omega^q_l
        auto upper = [&](int a, int b) -> const SparseAltForm& { return up[static_cast<std::size_t>(a * m + b)]; };

        double premise = 0.0;
        for (int q = 0; q < m; ++q) {
            FormBuilder acc(m, std::min(3, m));
            if (m >= 3)
                for (int l = 0; l < m; ++l) acc.add_wedge(mixed(q, l), theta[static_cast<std::size_t>(l)]);
            premise = std::max(premise, acc.build().max_abs());
        }
        premise_max = std::max(premise_max, premise);
        if (premise >= 1e-10) {
            ++skipped;
            continue;
        }
        const SparlingTable table(theta, {});
        for (int i1 = 0; i1 < m; ++i1)
            for (int j1 = 0; j1 < m; ++j1) {
                FormBuilder lhs(m, m), rhs(m, m);
                for_each_tuple(m, r - 1, [&](const IndexTuple& Ip) {
                    for_each_tuple(m, r - 1, [&](const IndexTuple& Jp) {
                        SparseAltForm tail = SparseAltForm::scalar(m, 1.0);
                        for (int u = 0; u < r - 1; ++u) tail = wedge(tail, upper(Ip[u], Jp[u]));
                        for (int q = 0; q < m; ++q) {
                            // theta_{q i2..ir j1 j2..jr} and theta_{i1 i2..ir q j2..jr}
                            IndexTuple a{q};
                            a.insert(a.end(), Ip.begin(), Ip.end());
                            a.push_back(j1);
                            a.insert(a.end(), Jp.begin(), Jp.end());
                            IndexTuple b{i1};
                            b.insert(b.end(), Ip.begin(), Ip.end());
                            b.push_back(q);
                            b.insert(b.end(), Jp.begin(), Jp.end());
                            if (sort_sign(a) != 0) lhs.add(wedge(wedge(mixed(q, i1), table.form(a)), tail));
                            if (sort_sign(b) != 0) rhs.add(wedge(wedge(mixed(q, j1), table.form(b)), tail), -1.0);
                        }
                    });
                });
                out.max_deviation = std::max(out.max_deviation, max_abs_difference(lhs.build(), rhs.build()));
            }
        ++out.samples;
    }
    out.detail = "premise max " + detail::sci(premise_max) + ", samples skipped " + std::to_string(skipped);
    return out;
}

}  // namespace lovelock
