#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lovelock/alt.hpp"
#include "lovelock/checks.hpp"
#include "lovelock/metrics.hpp"
#include "lovelock/xalg.hpp"

namespace lovelock::detail {

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random k-form on R^n with about `terms` distinct basis terms.
inline SparseAltForm random_form(int n, int k, std::mt19937_64& rng, int terms = 6) {
    if (k == 0) return SparseAltForm::scalar(n, uniform(rng));
    const auto basis = combinations(n, k);
    FormBuilder b(n, k);
    const int count = std::min<int>(terms, static_cast<int>(basis.size()));
    for (int t = 0; t < count; ++t) {
        const auto& idx = basis[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(basis.size()) - 1))];
        b.add(IndexMask::from_indices(idx), uniform(rng));
    }
    return b.build();
}

// Every basis term present.
inline SparseAltForm random_dense_form(int n, int k, std::mt19937_64& rng) {
    FormBuilder b(n, k);
    for (const auto& idx : combinations(n, k)) b.add(IndexMask::from_indices(idx), uniform(rng));
    return b.build();
}

inline TangentVector random_vector(int n, std::mt19937_64& rng) {
    TangentVector v(n);
    for (int i = 0; i < n; ++i) v.set(i, uniform(rng));
    return v;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
    Eigen::MatrixXd a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = uniform(rng);
    return a;
}

inline double max_abs_difference(std::span<const SparseAltForm> a, std::span<const SparseAltForm> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, lovelock::max_abs_difference(a[i], b[i]));
    return d;
}

inline FittedConstant summarize_constant(const std::string& name, int m, int r, const std::vector<double>& values) {
    FittedConstant c{name, m, r, 0.0, 0.0, static_cast<int>(values.size())};
    if (values.empty()) return c;
    for (double v : values) c.value += v;
    c.value /= static_cast<double>(values.size());
    if (values.size() > 1) {
        for (double v : values) c.variance += (v - c.value) * (v - c.value);
        c.variance /= static_cast<double>(values.size() - 1);
    }
    return c;
}

// (max - min) / |mean|, 0 for fewer than two values.
inline double relative_spread(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    return (*hi - *lo) / std::abs(mean);
}

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Random polynomial metric of the given signature and a point in [-0.5, 0.5]^m.
struct MetricDraw {
    std::unique_ptr<MetricSource> source;
    std::vector<double> x;
};

inline MetricDraw random_metric(int m, const Signature& eta, std::mt19937_64& rng) {
    MetricDraw d;
    d.source = make_random_poly_metric(m, rng(), 0.1, eta);
    for (int i = 0; i < m; ++i) d.x.push_back(uniform(rng, -0.5, 0.5));
    return d;
}

}  // namespace lovelock::detail
