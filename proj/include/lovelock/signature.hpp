#pragma once

#include <vector>

namespace lovelock {

// Diagonal metric eta on R^m with entries +-1.
class Signature {
public:
    explicit Signature(std::vector<int> diag);

    static Signature lorentzian(int m);  // diag(-1, 1, ..., 1)
    static Signature euclidean(int m);

    int m() const { return static_cast<int>(diag_.size()); }
    int operator[](int i) const { return diag_[static_cast<std::size_t>(i)]; }
    int det() const;
    int negatives() const;
    const std::vector<int>& diag() const { return diag_; }

private:
    std::vector<int> diag_;
};

}  // namespace lovelock
