#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lovelock {

// Ordered multi-index. Entries are 0-based.
using IndexTuple = std::vector<int>;

// +1/-1 for even/odd permutations of (0,...,k-1), 0 on repeats.
int levi_civita(std::span<const int> seq);

// Sign of the permutation that sorts seq, 0 if seq has a repeated entry.
int sort_sign(std::span<const int> seq);

// Generalized Kronecker delta with the given upper and lower tuples.
int gkdelta(std::span<const int> upper, std::span<const int> lower);

// (1/p!) sum over axis permutations, dense row-major input with p axes of extent n.
std::vector<double> antisymmetrize(std::span<const double> a, int n, int p);

std::int64_t factorial(int k);
std::int64_t binomial(int n, int k);

struct SignedPermutation {
    std::vector<int> perm;
    int sign;
};

// All permutations of (0,...,k-1) in lexicographic order, with their signs.
std::vector<SignedPermutation> permutations(int k);

// Strictly increasing k-subsets of [0,n) in lexicographic order.
std::vector<IndexTuple> combinations(int n, int k);

// Position of a strictly increasing tuple in combinations(n, k).
int combination_rank(std::span<const int> sorted, int n);

// Visit every tuple in [0,n)^len in row-major order.
template <class F>
void for_each_tuple(int n, int len, F&& f) {
    IndexTuple t(static_cast<std::size_t>(len), 0);
    while (true) {
        f(static_cast<const IndexTuple&>(t));
        int pos = len - 1;
        while (pos >= 0 && ++t[pos] == n) {
            t[pos] = 0;
            --pos;
        }
        if (pos < 0) return;
    }
}

struct EpsDeltaReport {
    bool pass = false;
    std::int64_t max_abs_deviation = 0;
    std::int64_t assignments = 0;
};

// eps_{i1..ik i(k+1)..im} eps^{i1..ik j(k+1)..jm} = k! delta^{j..}_{i..}, brute force.
EpsDeltaReport verify_eps_delta(int m, int k);

}  // namespace lovelock
