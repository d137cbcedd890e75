#pragma once

#include <cstddef>
#include <vector>

namespace lovelock {

// Dense array with `rank` axes of equal extent, row-major.
class Tensor {
public:
    Tensor() = default;
    Tensor(int extent, int rank) : n_(extent), rank_(rank) {
        std::size_t size = 1;
        for (int i = 0; i < rank; ++i) size *= static_cast<std::size_t>(extent);
        data_.assign(size, 0.0);
    }

    int extent() const { return n_; }
    int rank() const { return rank_; }
    std::size_t size() const { return data_.size(); }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    template <class... I>
    double& operator()(I... idx) {
        return data_[offset(idx...)];
    }
    template <class... I>
    double operator()(I... idx) const {
        return data_[offset(idx...)];
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = m < (v < 0 ? -v : v) ? (v < 0 ? -v : v) : m;
        return m;
    }

private:
    template <class... I>
    std::size_t offset(I... idx) const {
        std::size_t off = 0;
        ((off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
        return off;
    }

    int n_ = 0;
    int rank_ = 0;
    std::vector<double> data_;
};

}  // namespace lovelock
