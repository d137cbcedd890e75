#include "lovelock/signature.hpp"

#include <algorithm>
#include <stdexcept>

namespace lovelock {

Signature::Signature(std::vector<int> diag) : diag_(std::move(diag)) {
    if (diag_.empty()) throw std::domain_error("Signature: empty");
    for (int s : diag_)
        if (s != 1 && s != -1) throw std::domain_error("Signature: entries must be +1 or -1");
}

Signature Signature::lorentzian(int m) {
    std::vector<int> d(static_cast<std::size_t>(m), 1);
    d[0] = -1;
    return Signature(std::move(d));
}

Signature Signature::euclidean(int m) { return Signature(std::vector<int>(static_cast<std::size_t>(m), 1)); }

int Signature::det() const {
    int d = 1;
    for (int s : diag_) d *= s;
    return d;
}

int Signature::negatives() const { return static_cast<int>(std::count(diag_.begin(), diag_.end(), -1)); }

}  // namespace lovelock
