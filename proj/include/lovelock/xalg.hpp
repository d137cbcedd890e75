#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lovelock/alt.hpp"

namespace lovelock {

// Index set over [0,128) packed in two words. A strictly increasing tuple
// and its bit set carry the same information.
struct IndexMask {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    static constexpr int kCapacity = 128;

    static IndexMask bit(int i) {
        IndexMask m;
        if (i < 64) m.lo = std::uint64_t{1} << i;
        else m.hi = std::uint64_t{1} << (i - 64);
        return m;
    }
    // Bits strictly below i.
    static IndexMask below(int i) {
        IndexMask m;
        if (i <= 0) return m;
        if (i < 64) {
            m.lo = (std::uint64_t{1} << i) - 1;
        } else {
            m.lo = ~std::uint64_t{0};
            m.hi = (i == 128) ? ~std::uint64_t{0} : (std::uint64_t{1} << (i - 64)) - 1;
        }
        return m;
    }
    bool test(int i) const { return i < 64 ? (lo >> i) & 1U : (hi >> (i - 64)) & 1U; }
    int count() const { return std::popcount(lo) + std::popcount(hi); }
    bool empty() const { return (lo | hi) == 0; }
    bool intersects(IndexMask o) const { return ((lo & o.lo) | (hi & o.hi)) != 0; }
    int lowest() const { return lo ? std::countr_zero(lo) : 64 + std::countr_zero(hi); }
    int highest() const { return hi ? 127 - std::countl_zero(hi) : 63 - std::countl_zero(lo); }

    IndexMask operator|(IndexMask o) const { return {lo | o.lo, hi | o.hi}; }
    IndexMask operator&(IndexMask o) const { return {lo & o.lo, hi & o.hi}; }
    IndexMask without(int i) const {
        IndexMask b = bit(i);
        return {lo & ~b.lo, hi & ~b.hi};
    }
    friend bool operator==(IndexMask a, IndexMask b) = default;
    friend bool operator<(IndexMask a, IndexMask b) { return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo; }

    template <class F>
    void for_each(F&& f) const {
        for (std::uint64_t w = lo; w; w &= w - 1) f(std::countr_zero(w));
        for (std::uint64_t w = hi; w; w &= w - 1) f(64 + std::countr_zero(w));
    }
    IndexTuple indices() const;
    static IndexMask from_indices(std::span<const int> idx);
};

// Number of entries of `set` strictly greater than i.
inline int count_above(IndexMask set, int i) { return set.count() - (set & IndexMask::below(i + 1)).count(); }

// Sign of moving the increasing tuple b to the right of a, i.e. parity of pairs (x in a, y in b) with x > y.
int merge_sign(IndexMask a, IndexMask b);

struct FormTerm {
    IndexMask key;
    double coeff;
};

// Alternating k-form on an n-dimensional coordinate space, stored as a sorted list
// of (strictly increasing index set, coefficient).
class SparseAltForm {
public:
    static constexpr double kPruneThreshold = 1e-300;

    SparseAltForm() = default;
    SparseAltForm(int space_dim, int degree);

    static SparseAltForm scalar(int space_dim, double value);
    static SparseAltForm basis_covector(int space_dim, int i);
    // Arbitrary ordered tuples; each is sorted with its sign, tuples with repeats are dropped.
    static SparseAltForm from_terms(int space_dim, int degree,
                                    std::span<const std::pair<IndexTuple, double>> terms);

    int space_dim() const { return n_; }
    int degree() const { return k_; }
    std::span<const FormTerm> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    // Coefficient of dx^{t_1}^...^dx^{t_k} for any ordering of t.
    double coefficient(std::span<const int> tuple) const;
    double coefficient(IndexMask key) const;
    double max_abs() const;

    SparseAltForm& operator+=(const SparseAltForm& o);
    SparseAltForm& operator-=(const SparseAltForm& o);
    SparseAltForm& operator*=(double s);
    friend SparseAltForm operator+(SparseAltForm a, const SparseAltForm& b) { return a += b; }
    friend SparseAltForm operator-(SparseAltForm a, const SparseAltForm& b) { return a -= b; }
    friend SparseAltForm operator*(double s, SparseAltForm a) { return a *= s; }
    friend SparseAltForm operator*(SparseAltForm a, double s) { return a *= s; }
    SparseAltForm operator-() const { return -1.0 * *this; }

private:
    friend class FormBuilder;
    int n_ = 0;
    int k_ = 0;
    std::vector<FormTerm> terms_;
};

// Accumulates unsorted contributions and compacts them into a SparseAltForm.
class FormBuilder {
public:
    FormBuilder(int space_dim, int degree);

    void add(IndexMask key, double coeff);
    void add(const SparseAltForm& f, double scale = 1.0);
    void add_wedge(const SparseAltForm& a, const SparseAltForm& b, double scale = 1.0);
    SparseAltForm build();

private:
    void compact();
    int n_;
    int k_;
    std::size_t sorted_prefix_ = 0;
    std::vector<FormTerm> buf_;
};

class TangentVector {
public:
    TangentVector() = default;
    explicit TangentVector(int space_dim) : n_(space_dim) {}

    static TangentVector unit(int space_dim, int i);

    void set(int i, double v);
    double get(int i) const;
    int space_dim() const { return n_; }
    std::span<const std::pair<int, double>> components() const { return comps_; }

private:
    int n_ = 0;
    std::vector<std::pair<int, double>> comps_;  // sorted by index, no zero entries
};

SparseAltForm wedge(const SparseAltForm& a, const SparseAltForm& b);
SparseAltForm wedge_all(std::span<const SparseAltForm> factors, int space_dim);
SparseAltForm linear_combine(std::span<const double> coeffs, std::span<const SparseAltForm> forms);
SparseAltForm interior(const TangentVector& v, const SparseAltForm& a);
// L maps R^p -> R^n (n rows, p columns); the result lives on R^p.
SparseAltForm pullback(const Eigen::MatrixXd& L, const SparseAltForm& a);

struct Comparison {
    bool equal;
    double max_deviation;
};
Comparison approx_eq(const SparseAltForm& a, const SparseAltForm& b, double tol);
double max_abs_difference(const SparseAltForm& a, const SparseAltForm& b);

// Dense evaluation a(v_1, ..., v_k) for vectors given as columns of V (n x k).
double evaluate(const SparseAltForm& a, const Eigen::MatrixXd& V);

// Value spaces for vector-valued forms.
enum class ValueKind {
    Scalar,          // R
    Vector,          // R^m, basis e_a
    Covector,        // (R^m)*, basis e^a
    Matrix,          // gl(m), component (i, j) at i*m + j
    Multivector,     // Lambda^r R^m, lexicographic basis
    EndMultivector,  // End(Lambda^r R^m), component (A, B) = coefficient of e_B in F(e_A)
    EndDual,         // Lambda^r R^m (x) (Lambda^r R^m)*, component (A, B) = coefficient of e_A (x) e^B
    Linear,          // linear maps R^cols -> R^rows, row-major
};

struct ValueSpace {
    ValueKind kind = ValueKind::Scalar;
    int m = 1;     // underlying dimension
    int r = 0;     // multivector degree
    int rows = 0;  // Linear only
    int cols = 0;  // Linear only

    static ValueSpace scalar() { return {}; }
    static ValueSpace vector(int m) { return {ValueKind::Vector, m, 1}; }
    static ValueSpace covector(int m) { return {ValueKind::Covector, m, 1}; }
    static ValueSpace matrix(int m) { return {ValueKind::Matrix, m, 0}; }
    static ValueSpace multivector(int m, int r) { return {ValueKind::Multivector, m, r}; }
    static ValueSpace end_multivector(int m, int r) { return {ValueKind::EndMultivector, m, r}; }
    static ValueSpace end_dual(int m, int r) { return {ValueKind::EndDual, m, r}; }
    static ValueSpace linear(int rows, int cols) { return {ValueKind::Linear, 0, 0, rows, cols}; }

    int dim() const;
    friend bool operator==(const ValueSpace&, const ValueSpace&) = default;
};

struct VectorValuedForm {
    ValueSpace space;
    std::vector<SparseAltForm> comps;

    VectorValuedForm() = default;
    VectorValuedForm(ValueSpace vs, std::vector<SparseAltForm> components);
    VectorValuedForm(ValueSpace vs, int space_dim, int degree);

    int space_dim() const { return comps.front().space_dim(); }
    int degree() const { return comps.front().degree(); }
    const SparseAltForm& operator[](std::size_t c) const { return comps[c]; }
    SparseAltForm& operator[](std::size_t c) { return comps[c]; }
    double max_abs() const;
};

enum class Bilinear { Pairing, Action, Bracket, Wedge, ConstantMap };

// B(alpha ^, beta) expanded in the canonical bases.
VectorValuedForm bilinear_combine(Bilinear kind, const VectorValuedForm& alpha, const VectorValuedForm& beta);

// A fixed linear map applied to the values of beta.
VectorValuedForm apply_linear(const Eigen::MatrixXd& map, ValueSpace target, const VectorValuedForm& beta);

}  // namespace lovelock
