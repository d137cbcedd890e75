#include "lovelock/metrics.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lovelock {

namespace {

using nlohmann::json;

void check_point(std::span<const double> x, int m, const std::string& who) {
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument(who + ": point needs " + std::to_string(m) + " coordinates, got " +
                                    std::to_string(x.size()));
}

double param_double(const MetricParams& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("parameter " + key + "=" + it->second + " is not a number");
    }
}

int param_int(const MetricParams& p, const std::string& key, int fallback) {
    const double v = param_double(p, key, fallback);
    if (v != std::floor(v)) throw std::invalid_argument("parameter " + key + " must be an integer");
    return static_cast<int>(v);
}

Signature param_signature(const MetricParams& p, int m) {
    auto it = p.find("signature");
    if (it == p.end() || it->second == "lorentzian") return Signature::lorentzian(m);
    if (it->second == "euclidean" || it->second == "riemannian") return Signature::euclidean(m);
    throw std::invalid_argument("signature must be lorentzian or euclidean, got " + it->second);
}

MetricSample blank_sample(int m, std::span<const double> x) {
    MetricSample s;
    s.m = m;
    s.x.assign(x.begin(), x.end());
    s.g = Eigen::MatrixXd::Zero(m, m);
    s.dg = Tensor(m, 3);
    s.ddg = Tensor(m, 4);
    return s;
}

class Minkowski final : public MetricSource {
public:
    explicit Minkowski(Signature eta) : eta_(std::move(eta)) {}
    std::string name() const override { return "minkowski"; }
    int dim() const override { return eta_.m(); }
    Signature signature() const override { return eta_; }
    std::vector<double> default_point() const override { return std::vector<double>(static_cast<std::size_t>(dim()), 0.0); }
    MetricSample sample(std::span<const double> x) const override {
        check_point(x, dim(), name());
        auto s = blank_sample(dim(), x);
        for (int i = 0; i < dim(); ++i) s.g(i, i) = eta_[i];
        return finalize_sample(std::move(s));
    }

private:
    Signature eta_;
};

// (t, r, theta, phi), exterior region.
class Schwarzschild final : public MetricSource {
public:
    explicit Schwarzschild(double mass) : M_(mass) {
        if (!(mass > 0.0)) throw std::invalid_argument("schwarzschild: M must be positive");
    }
    std::string name() const override { return "schwarzschild"; }
    int dim() const override { return 4; }
    Signature signature() const override { return Signature::lorentzian(4); }
    std::vector<double> default_point() const override { return {0.0, 10.0 * M_, 1.0, 0.5}; }
    MetricSample sample(std::span<const double> x) const override {
        check_point(x, 4, name());
        const double r = x[1], th = x[2];
        if (!(r > 2.0 * M_)) throw std::invalid_argument("schwarzschild: need r > 2M");
        const double f = 1.0 - 2.0 * M_ / r;
        const double fp = 2.0 * M_ / (r * r);
        const double fpp = -4.0 * M_ / (r * r * r);
        const double sn = std::sin(th), cs = std::cos(th);

        auto s = blank_sample(4, x);
        s.g(0, 0) = -f;
        s.g(1, 1) = 1.0 / f;
        s.g(2, 2) = r * r;
        s.g(3, 3) = r * r * sn * sn;

        s.dg(1, 0, 0) = -fp;
        s.dg(1, 1, 1) = -fp / (f * f);
        s.dg(1, 2, 2) = 2.0 * r;
        s.dg(1, 3, 3) = 2.0 * r * sn * sn;
        s.dg(2, 3, 3) = 2.0 * r * r * sn * cs;

        s.ddg(1, 1, 0, 0) = -fpp;
        s.ddg(1, 1, 1, 1) = -fpp / (f * f) + 2.0 * fp * fp / (f * f * f);
        s.ddg(1, 1, 2, 2) = 2.0;
        s.ddg(1, 1, 3, 3) = 2.0 * sn * sn;
        s.ddg(1, 2, 3, 3) = 4.0 * r * sn * cs;
        s.ddg(2, 1, 3, 3) = 4.0 * r * sn * cs;
        s.ddg(2, 2, 3, 3) = 2.0 * r * r * (cs * cs - sn * sn);
        return finalize_sample(std::move(s));
    }

private:
    double M_;
};

// Product of round 2-spheres with radii a_i, coordinates (theta_1, phi_1, theta_2, phi_2, ...).
class SphereProduct final : public MetricSource {
public:
    explicit SphereProduct(std::vector<double> radii) : radii_(std::move(radii)) {
        for (double a : radii_)
            if (!(a > 0.0)) throw std::invalid_argument("sphere radius must be positive");
    }
    std::string name() const override { return radii_.size() == 1 ? "sphere" : "sphere-product"; }
    int dim() const override { return 2 * static_cast<int>(radii_.size()); }
    Signature signature() const override { return Signature::euclidean(dim()); }
    std::vector<double> default_point() const override {
        std::vector<double> x;
        for (std::size_t i = 0; i < radii_.size(); ++i) {
            x.push_back(1.0 - 0.3 * static_cast<double>(i));
            x.push_back(0.3 + 0.1 * static_cast<double>(i));
        }
        return x;
    }
    MetricSample sample(std::span<const double> x) const override {
        check_point(x, dim(), name());
        auto s = blank_sample(dim(), x);
        for (std::size_t i = 0; i < radii_.size(); ++i) {
            const int t = 2 * static_cast<int>(i), p = t + 1;
            const double a2 = radii_[i] * radii_[i];
            const double sn = std::sin(x[t]), cs = std::cos(x[t]);
            if (std::abs(sn) < 1e-8) throw std::invalid_argument(name() + ": coordinate singularity at the pole");
            s.g(t, t) = a2;
            s.g(p, p) = a2 * sn * sn;
            s.dg(t, p, p) = 2.0 * a2 * sn * cs;
            s.ddg(t, t, p, p) = 2.0 * a2 * (cs * cs - sn * sn);
        }
        return finalize_sample(std::move(s));
    }

private:
    std::vector<double> radii_;
};

// g = eta + eps (sum_rho A_rho x^rho + sum_{rho sigma} B_{rho sigma} x^rho x^sigma)
class RandomPoly final : public MetricSource {
public:
    RandomPoly(int m, unsigned long long seed, double eps, Signature eta)
        : m_(m), eps_(eps), eta_(std::move(eta)), lin_(m, 3), quad_(m, 4) {
        if (m < 2 || m > 8) throw std::invalid_argument("random-poly: dim must be in [2,8]");
        if (!(eps > 0.0 && eps <= 0.1)) throw std::invalid_argument("random-poly: eps must be in (0, 0.1]");
        if (eta_.m() != m) throw std::invalid_argument("random-poly: signature dimension mismatch");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double ml = 1.0 / m, mq = 1.0 / (m * m);
        for (int r = 0; r < m; ++r)
            for (int a = 0; a < m; ++a)
                for (int b = a; b < m; ++b) lin_(r, a, b) = lin_(r, b, a) = ml * u(rng);
        for (int r = 0; r < m; ++r)
            for (int s = r; s < m; ++s)
                for (int a = 0; a < m; ++a)
                    for (int b = a; b < m; ++b) {
                        const double v = mq * u(rng);
                        quad_(r, s, a, b) = quad_(r, s, b, a) = quad_(s, r, a, b) = quad_(s, r, b, a) = v;
                    }
    }
    std::string name() const override { return "random-poly"; }
    int dim() const override { return m_; }
    Signature signature() const override { return eta_; }
    std::vector<double> default_point() const override {
        std::vector<double> x(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) x[i] = 0.1 * (i + 1) * ((i & 1) ? -1.0 : 1.0);
        return x;
    }
    MetricSample sample(std::span<const double> x) const override {
        check_point(x, m_, name());
        auto s = blank_sample(m_, x);
        for (int a = 0; a < m_; ++a)
            for (int b = 0; b < m_; ++b) {
                double v = a == b ? eta_[a] : 0.0;
                for (int r = 0; r < m_; ++r) {
                    v += eps_ * lin_(r, a, b) * x[r];
                    for (int t = 0; t < m_; ++t) v += eps_ * quad_(r, t, a, b) * x[r] * x[t];
                }
                s.g(a, b) = v;
                for (int r = 0; r < m_; ++r) {
                    double d = lin_(r, a, b);
                    for (int t = 0; t < m_; ++t) d += 2.0 * quad_(r, t, a, b) * x[t];
                    s.dg(r, a, b) = eps_ * d;
                    for (int t = 0; t < m_; ++t) s.ddg(r, t, a, b) = 2.0 * eps_ * quad_(r, t, a, b);
                }
            }
        return finalize_sample(std::move(s));
    }

private:
    int m_;
    double eps_;
    Signature eta_;
    Tensor lin_;
    Tensor quad_;
};

std::vector<double> json_vector(const json& j, std::size_t n, const std::string& what) {
    if (!j.is_array() || j.size() != n) throw std::invalid_argument("tabulated metric: bad shape for " + what);
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw std::invalid_argument("tabulated metric: non-numeric entry in " + what);
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

MetricSample finalize_sample(MetricSample s) {
    const int m = s.m;
    const double scale = std::max(1.0, s.g.cwiseAbs().maxCoeff());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (std::abs(s.g(a, b) - s.g(b, a)) > 1e-12 * scale) throw std::invalid_argument("metric is not symmetric");
            for (int r = 0; r < m; ++r) {
                if (std::abs(s.dg(r, a, b) - s.dg(r, b, a)) > 1e-12 * scale)
                    throw std::invalid_argument("metric derivative is not symmetric in (mu, nu)");
                for (int t = 0; t < m; ++t)
                    if (std::abs(s.ddg(r, t, a, b) - s.ddg(r, t, b, a)) > 1e-12 * scale ||
                        std::abs(s.ddg(r, t, a, b) - s.ddg(t, r, a, b)) > 1e-12 * scale)
                        throw std::invalid_argument("second metric derivative lacks its symmetries");
            }
        }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(s.g);
    if (!lu.isInvertible()) throw std::invalid_argument("metric is singular at the point");
    s.det_g = lu.determinant();
    s.ginv = lu.inverse();
    return s;
}

std::unique_ptr<MetricSource> make_random_poly_metric(int dim, unsigned long long seed, double eps,
                                                      const Signature& eta) {
    return std::make_unique<RandomPoly>(dim, seed, eps, eta);
}

std::unique_ptr<MetricSource> make_builtin_metric(const std::string& name, const MetricParams& params) {
    if (name == "minkowski") {
        const int m = param_int(params, "dim", 4);
        if (m < 1 || m > 8) throw std::invalid_argument("minkowski: dim must be in [1,8]");
        return std::make_unique<Minkowski>(param_signature(params, m));
    }
    if (name == "schwarzschild") return std::make_unique<Schwarzschild>(param_double(params, "M", 1.0));
    if (name == "sphere") return std::make_unique<SphereProduct>(std::vector{param_double(params, "a", 1.0)});
    if (name == "sphere-product")
        return std::make_unique<SphereProduct>(std::vector{param_double(params, "a", 1.0), param_double(params, "b", 2.0)});
    if (name == "random-poly") {
        const int m = param_int(params, "dim", 4);
        const int seed = param_int(params, "seed", 1);
        if (seed < 0) throw std::invalid_argument("random-poly: seed must be non-negative");
        return std::make_unique<RandomPoly>(m, static_cast<unsigned long long>(seed), param_double(params, "eps", 0.1),
                                            param_signature(params, m));
    }
    return nullptr;
}

TabulatedMetric::TabulatedMetric(Signature eta, std::vector<MetricSample> points)
    : eta_(std::move(eta)), points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("tabulated metric: no points");
    for (auto& p : points_) {
        if (p.m != eta_.m()) throw std::invalid_argument("tabulated metric: point dimension differs from signature");
        p = finalize_sample(std::move(p));
    }
}

std::unique_ptr<TabulatedMetric> TabulatedMetric::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("tabulated metric: parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("signature") || !j.contains("points"))
        throw std::invalid_argument("tabulated metric: need dim, signature and points");
    const int m = j["dim"].get<int>();
    if (m < 1 || m > 8) throw std::invalid_argument("tabulated metric: dim out of range");
    std::vector<int> sig;
    for (double v : json_vector(j["signature"], static_cast<std::size_t>(m), "signature")) sig.push_back(static_cast<int>(v));
    std::vector<MetricSample> pts;
    for (const auto& p : j["points"]) {
        MetricSample s;
        s.m = m;
        s.x = json_vector(p.at("x"), static_cast<std::size_t>(m), "x");
        s.g = Eigen::MatrixXd(m, m);
        s.dg = Tensor(m, 3);
        s.ddg = Tensor(m, 4);
        const auto& g = p.at("g");
        const auto& dg = p.at("dg");
        const auto& ddg = p.at("ddg");
        if (!g.is_array() || g.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("tabulated metric: bad g");
        for (int a = 0; a < m; ++a) {
            const auto row = json_vector(g[a], static_cast<std::size_t>(m), "g");
            for (int b = 0; b < m; ++b) s.g(a, b) = row[b];
        }
        if (!dg.is_array() || dg.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("tabulated metric: bad dg");
        for (int r = 0; r < m; ++r) {
            if (!dg[r].is_array() || dg[r].size() != static_cast<std::size_t>(m)) throw std::invalid_argument("tabulated metric: bad dg");
            for (int a = 0; a < m; ++a) {
                const auto row = json_vector(dg[r][a], static_cast<std::size_t>(m), "dg");
                for (int b = 0; b < m; ++b) s.dg(r, a, b) = row[b];
            }
        }
        if (!ddg.is_array() || ddg.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("tabulated metric: bad ddg");
        for (int r = 0; r < m; ++r) {
            if (!ddg[r].is_array() || ddg[r].size() != static_cast<std::size_t>(m)) throw std::invalid_argument("tabulated metric: bad ddg");
            for (int t = 0; t < m; ++t) {
                if (!ddg[r][t].is_array() || ddg[r][t].size() != static_cast<std::size_t>(m))
                    throw std::invalid_argument("tabulated metric: bad ddg");
                for (int a = 0; a < m; ++a) {
                    const auto row = json_vector(ddg[r][t][a], static_cast<std::size_t>(m), "ddg");
                    for (int b = 0; b < m; ++b) s.ddg(r, t, a, b) = row[b];
                }
            }
        }
        pts.push_back(std::move(s));
    }
    return std::make_unique<TabulatedMetric>(Signature(sig), std::move(pts));
}

std::unique_ptr<TabulatedMetric> TabulatedMetric::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open metric file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

MetricSample TabulatedMetric::sample(std::span<const double> x) const {
    check_point(x, dim(), name());
    double scale = 1.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    for (const auto& p : points_) {
        double d = 0.0;
        for (int i = 0; i < dim(); ++i) d = std::max(d, std::abs(p.x[i] - x[i]));
        if (d <= 1e-12 * scale) return p;
    }
    throw std::invalid_argument("tabulated metric: no sample at the requested point");
}

std::string TabulatedMetric::to_json_text() const {
    const int m = dim();
    json j;
    j["dim"] = m;
    j["signature"] = eta_.diag();
    j["points"] = json::array();
    for (const auto& p : points_) {
        json pj;
        pj["x"] = p.x;
        json g = json::array(), dg = json::array(), ddg = json::array();
        for (int a = 0; a < m; ++a) {
            std::vector<double> row;
            for (int b = 0; b < m; ++b) row.push_back(p.g(a, b));
            g.push_back(row);
        }
        for (int r = 0; r < m; ++r) {
            json blk = json::array();
            for (int a = 0; a < m; ++a) {
                std::vector<double> row;
                for (int b = 0; b < m; ++b) row.push_back(p.dg(r, a, b));
                blk.push_back(row);
            }
            dg.push_back(blk);
        }
        for (int r = 0; r < m; ++r) {
            json outer = json::array();
            for (int t = 0; t < m; ++t) {
                json blk = json::array();
                for (int a = 0; a < m; ++a) {
                    std::vector<double> row;
                    for (int b = 0; b < m; ++b) row.push_back(p.ddg(r, t, a, b));
                    blk.push_back(row);
                }
                outer.push_back(blk);
            }
            ddg.push_back(outer);
        }
        pj["g"] = g;
        pj["dg"] = dg;
        pj["ddg"] = ddg;
        j["points"].push_back(pj);
    }
    return j.dump();
}

std::unique_ptr<MetricSource> resolve_metric(const std::string& name_or_path, const MetricParams& params) {
    if (auto builtin = make_builtin_metric(name_or_path, params)) return builtin;
    return TabulatedMetric::from_file(name_or_path);
}

}  // namespace lovelock
