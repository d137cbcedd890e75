#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <random>
#include <vector>

#include "lovelock/alt.hpp"
#include "lovelock/xalg.hpp"

namespace testing {

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random sparse k-form with a handful of terms on distinct index sets.
inline lovelock::SparseAltForm random_form(int n, int k, std::mt19937_64& rng, int terms = 5) {
    std::vector<std::pair<lovelock::IndexTuple, double>> t;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < terms; ++i) {
        lovelock::IndexTuple idx;
        while (static_cast<int>(idx.size()) < k) {
            const int c = pick(rng);
            if (std::find(idx.begin(), idx.end(), c) == idx.end()) idx.push_back(c);
        }
        t.emplace_back(idx, uniform(rng));
    }
    return lovelock::SparseAltForm::from_terms(n, k, t);
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
    Eigen::MatrixXd a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = uniform(rng);
    return a;
}

// Parity by counting inversions.
inline int inversion_sign(const std::vector<int>& s) {
    int inv = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (s[i] == s[j]) return 0;
            if (s[i] > s[j]) ++inv;
        }
    return inv % 2 ? -1 : 1;
}

// Form value on the columns of V: sum over terms of coeff * det of the selected rows.
inline double form_value(const lovelock::SparseAltForm& a, const Eigen::MatrixXd& V) {
    double s = 0.0;
    for (const auto& t : a.terms()) {
        const auto idx = t.key.indices();
        Eigen::MatrixXd sub(idx.size(), V.cols());
        for (std::size_t i = 0; i < idx.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = V.row(idx[i]);
        s += t.coeff * (idx.empty() ? 1.0 : sub.determinant());
    }
    return s;
}

// (a ^ b)(v_1..v_{k+l}) as the signed sum over (k,l)-shuffles.
inline double wedge_value(const lovelock::SparseAltForm& a, const lovelock::SparseAltForm& b, const Eigen::MatrixXd& V) {
    const int k = a.degree(), l = b.degree();
    double s = 0.0;
    for (const auto& first : lovelock::combinations(k + l, k)) {
        std::vector<int> order = first, rest;
        for (int i = 0; i < k + l; ++i)
            if (std::find(first.begin(), first.end(), i) == first.end()) rest.push_back(i);
        order.insert(order.end(), rest.begin(), rest.end());
        Eigen::MatrixXd va(V.rows(), k), vb(V.rows(), l);
        for (int i = 0; i < k; ++i) va.col(i) = V.col(first[i]);
        for (int i = 0; i < l; ++i) vb.col(i) = V.col(rest[i]);
        s += inversion_sign(order) * form_value(a, va) * form_value(b, vb);
    }
    return s;
}

}  // namespace testing
