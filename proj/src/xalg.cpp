#include "lovelock/xalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lovelock {

IndexTuple IndexMask::indices() const {
    IndexTuple out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](int i) { out.push_back(i); });
    return out;
}

IndexMask IndexMask::from_indices(std::span<const int> idx) {
    IndexMask m;
    for (int i : idx) m = m | bit(i);
    return m;
}

int merge_sign(IndexMask a, IndexMask b) {
    int crossings = 0;
    b.for_each([&](int y) { crossings += count_above(a, y); });
    return (crossings & 1) ? -1 : 1;
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

bool prunable(double c) { return std::abs(c) < SparseAltForm::kPruneThreshold; }

}  // namespace

// ---------------------------------------------------------------- SparseAltForm

SparseAltForm::SparseAltForm(int space_dim, int degree) : n_(space_dim), k_(degree) {
    require(space_dim > 0 && space_dim <= IndexMask::kCapacity, "SparseAltForm: space dimension out of range");
    require(degree >= 0 && degree <= space_dim, "SparseAltForm: degree out of range");
}

SparseAltForm SparseAltForm::scalar(int space_dim, double value) {
    SparseAltForm f(space_dim, 0);
    if (!prunable(value)) f.terms_.push_back({IndexMask{}, value});
    return f;
}

SparseAltForm SparseAltForm::basis_covector(int space_dim, int i) {
    SparseAltForm f(space_dim, 1);
    if (i < 0 || i >= space_dim)
        throw std::out_of_range("basis_covector: index " + std::to_string(i) + " outside [0," +
                                std::to_string(space_dim) + ")");
    f.terms_.push_back({IndexMask::bit(i), 1.0});
    return f;
}

SparseAltForm SparseAltForm::from_terms(int space_dim, int degree,
                                        std::span<const std::pair<IndexTuple, double>> terms) {
    FormBuilder b(space_dim, degree);
    for (const auto& [tuple, c] : terms) {
        require(static_cast<int>(tuple.size()) == degree, "from_terms: tuple length differs from degree");
        for (int i : tuple) require(i >= 0 && i < space_dim, "from_terms: index out of range");
        const int s = sort_sign(tuple);
        if (s == 0) continue;
        b.add(IndexMask::from_indices(tuple), s * c);
    }
    return b.build();
}

double SparseAltForm::coefficient(IndexMask key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const FormTerm& t, IndexMask k) { return t.key < k; });
    return (it != terms_.end() && it->key == key) ? it->coeff : 0.0;
}

double SparseAltForm::coefficient(std::span<const int> tuple) const {
    if (static_cast<int>(tuple.size()) != k_) return 0.0;
    const int s = sort_sign(tuple);
    if (s == 0) return 0.0;
    return s * coefficient(IndexMask::from_indices(tuple));
}

double SparseAltForm::max_abs() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
}

SparseAltForm& SparseAltForm::operator+=(const SparseAltForm& o) {
    if (terms_.empty() && n_ == 0) return *this = o;
    require(n_ == o.n_ && k_ == o.k_, "form sum: dimension or degree mismatch");
    std::vector<FormTerm> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.cbegin();
    auto b = o.terms_.cbegin();
    while (a != terms_.cend() || b != o.terms_.cend()) {
        if (b == o.terms_.cend() || (a != terms_.cend() && a->key < b->key)) {
            out.push_back(*a++);
        } else if (a == terms_.cend() || b->key < a->key) {
            out.push_back(*b++);
        } else {
            const double c = a->coeff + b->coeff;
            if (!prunable(c)) out.push_back({a->key, c});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(out);
    return *this;
}

SparseAltForm& SparseAltForm::operator-=(const SparseAltForm& o) { return *this += -1.0 * o; }

SparseAltForm& SparseAltForm::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= s;
    std::erase_if(terms_, [](const FormTerm& t) { return prunable(t.coeff); });
    return *this;
}

// ---------------------------------------------------------------- FormBuilder

FormBuilder::FormBuilder(int space_dim, int degree) : n_(space_dim), k_(degree) {
    require(space_dim > 0 && space_dim <= IndexMask::kCapacity, "FormBuilder: space dimension out of range");
    require(degree >= 0 && degree <= space_dim, "FormBuilder: degree out of range");
}

void FormBuilder::add(IndexMask key, double coeff) {
    if (coeff == 0.0) return;
    buf_.push_back({key, coeff});
    if (buf_.size() > 4096 && buf_.size() > 4 * sorted_prefix_) compact();
}

void FormBuilder::add(const SparseAltForm& f, double scale) {
    if (f.is_zero() || scale == 0.0) return;
    require(f.space_dim() == n_ && f.degree() == k_, "FormBuilder::add: dimension or degree mismatch");
    for (const auto& t : f.terms()) add(t.key, scale * t.coeff);
}

void FormBuilder::add_wedge(const SparseAltForm& a, const SparseAltForm& b, double scale) {
    if (a.is_zero() || b.is_zero() || scale == 0.0) return;
    require(a.space_dim() == n_ && b.space_dim() == n_, "wedge: dimension mismatch");
    require(a.degree() + b.degree() == k_, "FormBuilder::add_wedge: degree mismatch");
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) {
            if (ta.key.intersects(tb.key)) continue;
            add(ta.key | tb.key, merge_sign(ta.key, tb.key) * ta.coeff * tb.coeff * scale);
        }
}

void FormBuilder::compact() {
    std::sort(buf_.begin(), buf_.end(), [](const FormTerm& x, const FormTerm& y) { return x.key < y.key; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < buf_.size();) {
        FormTerm acc = buf_[r++];
        while (r < buf_.size() && buf_[r].key == acc.key) acc.coeff += buf_[r++].coeff;
        buf_[w++] = acc;
    }
    buf_.resize(w);
    sorted_prefix_ = w;
}

SparseAltForm FormBuilder::build() {
    compact();
    SparseAltForm f(n_, k_);
    f.terms_.reserve(buf_.size());
    for (const auto& t : buf_)
        if (!prunable(t.coeff)) f.terms_.push_back(t);
    buf_.clear();
    sorted_prefix_ = 0;
    return f;
}

// ---------------------------------------------------------------- TangentVector

TangentVector TangentVector::unit(int space_dim, int i) {
    TangentVector v(space_dim);
    v.set(i, 1.0);
    return v;
}

void TangentVector::set(int i, double v) {
    if (i < 0 || i >= n_) throw std::out_of_range("TangentVector: index out of range");
    auto it = std::lower_bound(comps_.begin(), comps_.end(), i,
                               [](const std::pair<int, double>& c, int j) { return c.first < j; });
    if (it != comps_.end() && it->first == i) {
        if (v == 0.0) comps_.erase(it);
        else it->second = v;
    } else if (v != 0.0) {
        comps_.insert(it, {i, v});
    }
}

double TangentVector::get(int i) const {
    auto it = std::lower_bound(comps_.begin(), comps_.end(), i,
                               [](const std::pair<int, double>& c, int j) { return c.first < j; });
    return (it != comps_.end() && it->first == i) ? it->second : 0.0;
}

// ---------------------------------------------------------------- operations

SparseAltForm wedge(const SparseAltForm& a, const SparseAltForm& b) {
    require(a.space_dim() == b.space_dim(), "wedge: dimension mismatch");
    const int n = a.space_dim();
    const int k = a.degree() + b.degree();
    if (k > n) return SparseAltForm(n, 0);
    FormBuilder out(n, k);
    out.add_wedge(a, b);
    return out.build();
}

SparseAltForm wedge_all(std::span<const SparseAltForm> factors, int space_dim) {
    SparseAltForm acc = SparseAltForm::scalar(space_dim, 1.0);
    for (const auto& f : factors) acc = wedge(acc, f);
    return acc;
}

SparseAltForm linear_combine(std::span<const double> coeffs, std::span<const SparseAltForm> forms) {
    require(coeffs.size() == forms.size(), "linear_combine: length mismatch");
    require(!forms.empty(), "linear_combine: empty input");
    FormBuilder b(forms[0].space_dim(), forms[0].degree());
    for (std::size_t i = 0; i < forms.size(); ++i) {
        require(forms[i].space_dim() == forms[0].space_dim() && forms[i].degree() == forms[0].degree(),
                "linear_combine: degree or dimension mismatch");
        b.add(forms[i], coeffs[i]);
    }
    return b.build();
}

SparseAltForm interior(const TangentVector& v, const SparseAltForm& a) {
    require(v.space_dim() == a.space_dim(), "interior: dimension mismatch");
    require(a.degree() >= 1, "interior: degree-0 form");
    FormBuilder out(a.space_dim(), a.degree() - 1);
    for (const auto& t : a.terms())
        for (const auto& [idx, val] : v.components()) {
            if (!t.key.test(idx)) continue;
            const int pos = (t.key & IndexMask::below(idx)).count();
            out.add(t.key.without(idx), ((pos & 1) ? -1.0 : 1.0) * val * t.coeff);
        }
    return out.build();
}

SparseAltForm pullback(const Eigen::MatrixXd& L, const SparseAltForm& a) {
    const int n = a.space_dim();
    require(L.rows() == n, "pullback: matrix row count differs from form dimension");
    const int p = static_cast<int>(L.cols());
    require(p > 0 && p <= IndexMask::kCapacity, "pullback: target dimension out of range");
    if (a.degree() > p) return SparseAltForm(p, 0);

    // Pulled-back covectors dx^i = sum_j L(i,j) dy^j, sparse rows.
    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j)
            if (L(i, j) != 0.0) rows[i].push_back({j, L(i, j)});

    FormBuilder out(p, a.degree());
    std::vector<FormTerm> partial, next;
    for (const auto& t : a.terms()) {
        partial.assign(1, {IndexMask{}, t.coeff});
        t.key.for_each([&](int i) {
            next.clear();
            for (const auto& pt : partial)
                for (const auto& [j, lij] : rows[i]) {
                    if (pt.key.test(j)) continue;
                    const double s = (count_above(pt.key, j) & 1) ? -1.0 : 1.0;
                    next.push_back({pt.key | IndexMask::bit(j), s * lij * pt.coeff});
                }
            std::swap(partial, next);
        });
        for (const auto& pt : partial) out.add(pt.key, pt.coeff);
    }
    return out.build();
}

double max_abs_difference(const SparseAltForm& a, const SparseAltForm& b) {
    require(a.space_dim() == b.space_dim(), "comparison: dimension mismatch");
    if (a.degree() != b.degree()) {
        require(a.is_zero() || b.is_zero(), "comparison: degree mismatch");
        return std::max(a.max_abs(), b.max_abs());
    }
    double dev = 0.0;
    auto x = a.terms().begin(), y = b.terms().begin();
    while (x != a.terms().end() || y != b.terms().end()) {
        if (y == b.terms().end() || (x != a.terms().end() && x->key < y->key)) {
            dev = std::max(dev, std::abs(x->coeff));
            ++x;
        } else if (x == a.terms().end() || y->key < x->key) {
            dev = std::max(dev, std::abs(y->coeff));
            ++y;
        } else {
            dev = std::max(dev, std::abs(x->coeff - y->coeff));
            ++x;
            ++y;
        }
    }
    return dev;
}

Comparison approx_eq(const SparseAltForm& a, const SparseAltForm& b, double tol) {
    const double dev = max_abs_difference(a, b);
    const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
    return {dev <= tol * scale, dev};
}

double evaluate(const SparseAltForm& a, const Eigen::MatrixXd& V) {
    require(V.rows() == a.space_dim() && V.cols() == a.degree(), "evaluate: vector block has wrong shape");
    const int k = a.degree();
    double acc = 0.0;
    for (const auto& t : a.terms()) {
        if (k == 0) {
            acc += t.coeff;
            continue;
        }
        Eigen::MatrixXd sub(k, k);
        int row = 0;
        t.key.for_each([&](int i) { sub.row(row++) = V.row(i); });
        acc += t.coeff * sub.determinant();
    }
    return acc;
}

// ---------------------------------------------------------------- vector-valued forms

int ValueSpace::dim() const {
    switch (kind) {
        case ValueKind::Scalar: return 1;
        case ValueKind::Vector:
        case ValueKind::Covector: return m;
        case ValueKind::Matrix: return m * m;
        case ValueKind::Multivector: return static_cast<int>(binomial(m, r));
        case ValueKind::EndMultivector:
        case ValueKind::EndDual: {
            const int b = static_cast<int>(binomial(m, r));
            return b * b;
        }
        case ValueKind::Linear: return rows * cols;
    }
    return 0;
}

VectorValuedForm::VectorValuedForm(ValueSpace vs, std::vector<SparseAltForm> components)
    : space(vs), comps(std::move(components)) {
    require(static_cast<int>(comps.size()) == space.dim(), "VectorValuedForm: component count differs from value dimension");
    for (const auto& c : comps)
        require(c.space_dim() == comps.front().space_dim() && c.degree() == comps.front().degree(),
                "VectorValuedForm: components differ in dimension or degree");
}

VectorValuedForm::VectorValuedForm(ValueSpace vs, int space_dim, int degree)
    : space(vs), comps(static_cast<std::size_t>(vs.dim()), SparseAltForm(space_dim, degree)) {}

double VectorValuedForm::max_abs() const {
    double m = 0.0;
    for (const auto& c : comps) m = std::max(m, c.max_abs());
    return m;
}

namespace {

VectorValuedForm combine_pairing(const VectorValuedForm& a, const VectorValuedForm& b) {
    const bool ok = (a.space.kind == ValueKind::Covector && b.space.kind == ValueKind::Vector &&
                     a.space.m == b.space.m) ||
                    (a.space.kind == ValueKind::EndDual && b.space.kind == ValueKind::EndMultivector &&
                     a.space.m == b.space.m && a.space.r == b.space.r);
    require(ok, "pairing: value spaces are not dual");
    const int n = a.space_dim();
    const int k = a.degree() + b.degree();
    if (k > n) return VectorValuedForm(ValueSpace::scalar(), n, 0);
    FormBuilder out(n, k);
    for (std::size_t c = 0; c < a.comps.size(); ++c) out.add_wedge(a[c], b[c]);
    return VectorValuedForm(ValueSpace::scalar(), {out.build()});
}

VectorValuedForm combine_action(const VectorValuedForm& a, const VectorValuedForm& b) {
    require(a.space.kind == ValueKind::Matrix && b.space.kind == ValueKind::Vector && a.space.m == b.space.m,
            "action: need gl(m) acting on R^m");
    const int m = a.space.m;
    const int n = a.space_dim();
    const int k = a.degree() + b.degree();
    if (k > n) return VectorValuedForm(b.space, n, 0);
    std::vector<SparseAltForm> out;
    for (int i = 0; i < m; ++i) {
        FormBuilder acc(n, k);
        for (int j = 0; j < m; ++j) acc.add_wedge(a[i * m + j], b[j]);
        out.push_back(acc.build());
    }
    return VectorValuedForm(b.space, std::move(out));
}

VectorValuedForm combine_bracket(const VectorValuedForm& a, const VectorValuedForm& b) {
    require(a.space.kind == ValueKind::Matrix && b.space == a.space, "bracket: need two gl(m)-valued forms");
    const int m = a.space.m;
    const int n = a.space_dim();
    const int k = a.degree() + b.degree();
    if (k > n) return VectorValuedForm(a.space, n, 0);
    const double graded = ((a.degree() * b.degree()) & 1) ? -1.0 : 1.0;
    std::vector<SparseAltForm> out;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            FormBuilder acc(n, k);
            for (int l = 0; l < m; ++l) {
                acc.add_wedge(a[i * m + l], b[l * m + j]);
                acc.add_wedge(b[i * m + l], a[l * m + j], -graded);
            }
            out.push_back(acc.build());
        }
    return VectorValuedForm(a.space, std::move(out));
}

VectorValuedForm combine_wedge(const VectorValuedForm& a, const VectorValuedForm& b) {
    require(a.space.kind == ValueKind::Vector && b.space == a.space, "wedge: need two R^m-valued forms");
    const int m = a.space.m;
    const int n = a.space_dim();
    const int k = a.degree() + b.degree();
    const ValueSpace target = ValueSpace::multivector(m, 2);
    if (k > n) return VectorValuedForm(target, n, 0);
    std::vector<SparseAltForm> out;
    for (const auto& pair : combinations(m, 2)) {
        FormBuilder acc(n, k);
        acc.add_wedge(a[pair[0]], b[pair[1]]);
        acc.add_wedge(a[pair[1]], b[pair[0]], -1.0);
        out.push_back(acc.build());
    }
    return VectorValuedForm(target, std::move(out));
}

VectorValuedForm combine_constant(const VectorValuedForm& a, const VectorValuedForm& b) {
    require(a.space.kind == ValueKind::Linear && a.degree() == 0 && a.space.cols == b.space.dim(),
            "constant_map: need a degree-0 Linear-valued map matching the source dimension");
    Eigen::MatrixXd map(a.space.rows, a.space.cols);
    for (int i = 0; i < a.space.rows; ++i)
        for (int j = 0; j < a.space.cols; ++j) map(i, j) = a[i * a.space.cols + j].coefficient(IndexMask{});
    // The target tag is not recoverable from a Linear map alone.
    ValueSpace target = (a.space.rows == b.space.dim()) ? b.space : ValueSpace::linear(a.space.rows, 1);
    return apply_linear(map, target, b);
}

}  // namespace

VectorValuedForm bilinear_combine(Bilinear kind, const VectorValuedForm& alpha, const VectorValuedForm& beta) {
    require(!alpha.comps.empty() && !beta.comps.empty(), "bilinear_combine: empty form");
    require(alpha.space_dim() == beta.space_dim(), "bilinear_combine: dimension mismatch");
    switch (kind) {
        case Bilinear::Pairing: return combine_pairing(alpha, beta);
        case Bilinear::Action: return combine_action(alpha, beta);
        case Bilinear::Bracket: return combine_bracket(alpha, beta);
        case Bilinear::Wedge: return combine_wedge(alpha, beta);
        case Bilinear::ConstantMap: return combine_constant(alpha, beta);
    }
    throw std::domain_error("bilinear_combine: unknown kind");
}

VectorValuedForm apply_linear(const Eigen::MatrixXd& map, ValueSpace target, const VectorValuedForm& beta) {
    require(map.cols() == beta.space.dim(), "apply_linear: map columns differ from source dimension");
    require(map.rows() == target.dim(), "apply_linear: map rows differ from target dimension");
    std::vector<SparseAltForm> out;
    out.reserve(static_cast<std::size_t>(map.rows()));
    for (Eigen::Index i = 0; i < map.rows(); ++i) {
        FormBuilder acc(beta.space_dim(), beta.degree());
        for (Eigen::Index j = 0; j < map.cols(); ++j) acc.add(beta[static_cast<std::size_t>(j)], map(i, j));
        out.push_back(acc.build());
    }
    return VectorValuedForm(target, std::move(out));
}

}  // namespace lovelock
