#include "stsync/synchrony.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stsync/kernels.hpp"

namespace stsync {

WarpOperator::WarpOperator(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
    std::vector<bool> seen(mapping_.size(), false);
    for (std::size_t m : mapping_) {
        if (m >= mapping_.size() || seen[m])
            throw std::invalid_argument("WarpOperator: mapping is not a bijection");
        seen[m] = true;
    }
}

WarpOperator WarpOperator::identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return WarpOperator(std::move(m));
}

Vec WarpOperator::apply(const Vec& v) const {
    if (v.size() != mapping_.size()) throw std::invalid_argument("WarpOperator: length mismatch");
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[mapping_[i]] = v[i];
    return out;
}

Vec WarpOperator::apply_transpose(const Vec& v) const {
    if (v.size() != mapping_.size()) throw std::invalid_argument("WarpOperator: length mismatch");
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[mapping_[i]];
    return out;
}

WarpOperator WarpOperator::compose(const WarpOperator& other) const {
    if (other.size() != size()) throw std::invalid_argument("WarpOperator: size mismatch");
    std::vector<std::size_t> m(size());
    for (std::size_t i = 0; i < size(); ++i) m[i] = mapping_[other.mapping_[i]];
    return WarpOperator(std::move(m));
}

WarpOperator make_shift_warp(std::size_t n, long offset) {
    if (n < 1) throw std::invalid_argument("make_shift_warp: n must be >= 1");
    long ln = static_cast<long>(n);
    long s = ((offset % ln) + ln) % ln;
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i)
        m[i] = static_cast<std::size_t>((static_cast<long>(i) + s) % ln);
    return WarpOperator(std::move(m));
}

WarpOperator make_shift_warp_2d(std::size_t h, std::size_t w, long dr, long dc) {
    if (h < 1 || w < 1) throw std::invalid_argument("make_shift_warp_2d: dims must be >= 1");
    long lh = static_cast<long>(h), lw = static_cast<long>(w);
    long sr = ((dr % lh) + lh) % lh;
    long sc = ((dc % lw) + lw) % lw;
    std::vector<std::size_t> m(h * w);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c) {
            std::size_t rr = static_cast<std::size_t>((static_cast<long>(r) + sr) % lh);
            std::size_t cc = static_cast<std::size_t>((static_cast<long>(c) + sc) % lw);
            m[r * w + c] = rr * w + cc;
        }
    return WarpOperator(std::move(m));
}

namespace {

void check_lengths(const FilterPair& pair, const Vec& x1, const Vec& x2) {
    if (pair.w1.size() != pair.w2.size() || pair.w1.size() != x1.size() || x1.size() != x2.size())
        throw std::invalid_argument("synchrony: vector length mismatch");
}

SynchronyVerdict verdict_from_responses(const Vec& responses, double tol, double floor) {
    double lo = responses[0], hi = responses[0], amax = 0.0;
    for (double r : responses) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        amax = std::max(amax, std::fabs(r));
    }
    if (amax < floor) return SynchronyVerdict::Indeterminate;
    return (hi - lo) <= tol * amax ? SynchronyVerdict::Synchronous
                                   : SynchronyVerdict::Asynchronous;
}

} // namespace

SynchronyVerdict check_synchrony(const FilterPair& pair, const Vec& x1, const Vec& x2,
                                 double tol, double floor) {
    check_lengths(pair, x1, x2);
    Vec responses = {kernels::dot(pair.w1.data(), x1.data(), x1.size()),
                     kernels::dot(pair.w2.data(), x2.data(), x2.size())};
    return verdict_from_responses(responses, tol, floor);
}

double product_response(const FilterPair& pair, const Vec& x1, const Vec& x2) {
    check_lengths(pair, x1, x2);
    return kernels::dot(pair.w1.data(), x1.data(), x1.size()) *
           kernels::dot(pair.w2.data(), x2.data(), x2.size());
}

SynchronyVerdict sequence_synchrony(const std::vector<Vec>& filters,
                                    const std::vector<Vec>& frames,
                                    double tol, double floor) {
    if (filters.size() != frames.size())
        throw std::invalid_argument("sequence_synchrony: filter/frame count mismatch");
    if (filters.size() < 2)
        throw std::invalid_argument("sequence_synchrony: need at least 2 frames");

    const std::size_t n = filters.front().size();
    Vec responses(filters.size());
    for (std::size_t i = 0; i < filters.size(); ++i) {
        if (filters[i].size() != n || frames[i].size() != n)
            throw std::invalid_argument("sequence_synchrony: vector length mismatch");
        responses[i] = kernels::dot(filters[i].data(), frames[i].data(), n);
    }
    return verdict_from_responses(responses, tol, floor);
}

double energy_response(const std::vector<Vec>& filters, const std::vector<Vec>& frames) {
    if (filters.size() != frames.size())
        throw std::invalid_argument("energy_response: filter/frame count mismatch");
    if (filters.empty()) throw std::invalid_argument("energy_response: empty sequence");

    const std::size_t n = filters.front().size();
    // Neumaier-compensated sum over frame responses; cancellation between
    // responses would otherwise dominate the square.
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < filters.size(); ++i) {
        if (filters[i].size() != n || frames[i].size() != n)
            throw std::invalid_argument("energy_response: vector length mismatch");
        double r = kernels::dot(filters[i].data(), frames[i].data(), n);
        double t = sum + r;
        if (std::fabs(sum) >= std::fabs(r))
            comp += (sum - t) + r;
        else
            comp += (r - t) + sum;
        sum = t;
    }
    double s = sum + comp;
    return s * s;
}

bool thresholded_sum_response(const FilterPair& pair, const Vec& x1, const Vec& x2,
                              double threshold) {
    check_lengths(pair, x1, x2);
    double s = kernels::dot(pair.w1.data(), x1.data(), x1.size()) +
               kernels::dot(pair.w2.data(), x2.data(), x2.size());
    return s >= threshold;
}

} // namespace stsync
