#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stsync {

// Minimal row-major dense matrix of doubles. Heavy factorizations go through
// Eigen; this type is what models and kernels operate on.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

    double* row(std::size_t r) { return v.data() + r * cols; }
    const double* row(std::size_t r) const { return v.data() + r * cols; }

    double& operator()(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }

    bool empty() const { return v.empty(); }
};

using Vec = std::vector<double>;

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace stsync
