#include "lovelock/alt.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lovelock {

namespace {

constexpr std::size_t kMaxRank = 32;

// Inversion parity of a tuple of distinct entries; 0 if an entry repeats.
int inversion_sign(std::span<const int> seq) {
    int inversions = 0;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b) {
            if (seq[a] == seq[b]) return 0;
            if (seq[a] > seq[b]) ++inversions;
        }
    return (inversions & 1) ? -1 : 1;
}

}  // namespace

int levi_civita(std::span<const int> seq) {
    const int k = static_cast<int>(seq.size());
    for (int v : seq)
        if (v < 0 || v >= k)
            throw std::domain_error("levi_civita: entry " + std::to_string(v) + " outside [0," +
                                    std::to_string(k) + ")");
    return inversion_sign(seq);
}

int sort_sign(std::span<const int> seq) { return inversion_sign(seq); }

int gkdelta(std::span<const int> upper, std::span<const int> lower) {
    if (upper.size() != lower.size())
        throw std::domain_error("gkdelta: upper and lower tuples differ in length");
    if (upper.size() > kMaxRank) throw std::domain_error("gkdelta: rank too large");
    const std::size_t k = upper.size();
    for (std::size_t a = 0; a < k; ++a)
        if (upper[a] < 0 || lower[a] < 0) throw std::domain_error("gkdelta: negative index");

    const int su = inversion_sign(upper);
    if (su == 0) return 0;
    const int sl = inversion_sign(lower);
    if (sl == 0) return 0;

    std::array<int, kMaxRank> u{}, l{};
    std::copy(upper.begin(), upper.end(), u.begin());
    std::copy(lower.begin(), lower.end(), l.begin());
    std::sort(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(k));
    if (!std::equal(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k), l.begin())) return 0;
    return su * sl;
}

std::vector<double> antisymmetrize(std::span<const double> a, int n, int p) {
    if (n <= 0 || p < 0) throw std::domain_error("antisymmetrize: bad shape");
    std::size_t size = 1;
    for (int i = 0; i < p; ++i) size *= static_cast<std::size_t>(n);
    if (a.size() != size) throw std::domain_error("antisymmetrize: array size does not match n^p");

    const auto perms = permutations(p);
    const double norm = 1.0 / static_cast<double>(factorial(p));
    std::vector<double> out(size, 0.0);
    std::vector<std::size_t> stride(static_cast<std::size_t>(p), 1);
    for (int ax = p - 2; ax >= 0; --ax) stride[ax] = stride[ax + 1] * static_cast<std::size_t>(n);

    std::size_t flat = 0;
    for_each_tuple(n, p, [&](const IndexTuple& idx) {
        double acc = 0.0;
        for (const auto& sp : perms) {
            std::size_t src = 0;
            for (int ax = 0; ax < p; ++ax) src += static_cast<std::size_t>(idx[sp.perm[ax]]) * stride[ax];
            acc += sp.sign * a[src];
        }
        out[flat++] = norm * acc;
    });
    return out;
}

std::int64_t factorial(int k) {
    if (k < 0) throw std::domain_error("factorial of negative number");
    std::int64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t b = 1;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

std::vector<SignedPermutation> permutations(int k) {
    std::vector<SignedPermutation> out;
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    do {
        out.push_back({p, inversion_sign(p)});
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<IndexTuple> combinations(int n, int k) {
    std::vector<IndexTuple> out;
    if (k < 0 || k > n) return out;
    IndexTuple c(static_cast<std::size_t>(k));
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.push_back(c);
        int pos = k - 1;
        while (pos >= 0 && c[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++c[pos];
        for (int q = pos + 1; q < k; ++q) c[q] = c[q - 1] + 1;
    }
    return out;
}

int combination_rank(std::span<const int> sorted, int n) {
    // Lexicographic rank: count subsets that precede `sorted`.
    const int k = static_cast<int>(sorted.size());
    std::int64_t rank = 0;
    int prev = -1;
    for (int pos = 0; pos < k; ++pos) {
        for (int v = prev + 1; v < sorted[pos]; ++v) rank += binomial(n - v - 1, k - pos - 1);
        prev = sorted[pos];
    }
    return static_cast<int>(rank);
}

EpsDeltaReport verify_eps_delta(int m, int k) {
    if (m > 6) throw std::domain_error("verify_eps_delta: m > 6 refused");
    if (m < 1 || k < 0 || k > m) throw std::domain_error("verify_eps_delta: need 0 <= k <= m");

    // Full epsilon table on [0,m)^m, row-major.
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(m);
    std::vector<signed char> eps(total);
    {
        std::size_t flat = 0;
        for_each_tuple(m, m, [&](const IndexTuple& t) { eps[flat++] = static_cast<signed char>(levi_civita(t)); });
    }

    const int free = m - k;
    std::size_t n_free = 1, n_contr = 1;
    for (int i = 0; i < free; ++i) n_free *= static_cast<std::size_t>(m);
    for (int i = 0; i < k; ++i) n_contr *= static_cast<std::size_t>(m);

    std::vector<IndexTuple> free_tuples;
    free_tuples.reserve(n_free);
    for_each_tuple(m, free, [&](const IndexTuple& t) { free_tuples.push_back(t); });

    const std::int64_t kf = factorial(k);
    EpsDeltaReport rep;
    for (std::size_t lo = 0; lo < n_free; ++lo)
        for (std::size_t up = 0; up < n_free; ++up) {
            std::int64_t lhs = 0;
            for (std::size_t c = 0; c < n_contr; ++c)
                lhs += eps[c * n_free + lo] * eps[c * n_free + up];
            const std::int64_t rhs = kf * gkdelta(free_tuples[up], free_tuples[lo]);
            rep.max_abs_deviation = std::max(rep.max_abs_deviation, lhs > rhs ? lhs - rhs : rhs - lhs);
            ++rep.assignments;
        }
    rep.pass = rep.max_abs_deviation == 0;
    return rep;
}

}  // namespace lovelock
