#pragma once

#include <cstddef>
#include <vector>

#include "stsync/linalg.hpp"

namespace stsync {

// Orthogonal image warp restricted to permutations of pixel indices.
// The implicit matrix P satisfies (P v)[mapping[i]] = v[i].
class WarpOperator {
public:
    explicit WarpOperator(std::vector<std::size_t> mapping); // validates bijection

    static WarpOperator identity(std::size_t n);

    std::size_t size() const { return mapping_.size(); }
    const std::vector<std::size_t>& mapping() const { return mapping_; }

    Vec apply(const Vec& v) const;
    Vec apply_transpose(const Vec& v) const;
    WarpOperator compose(const WarpOperator& other) const; // this after other

private:
    std::vector<std::size_t> mapping_;
};

// circular right shift by `offset` (reduced mod n)
WarpOperator make_shift_warp(std::size_t n, long offset);

// 2-D translation on an h x w grid, circular per axis
WarpOperator make_shift_warp_2d(std::size_t h, std::size_t w, long dr, long dc);

struct FilterPair {
    Vec w1, w2;
};

enum class SynchronyVerdict { Synchronous, Asynchronous, Indeterminate };

// Relative-tolerance equality of the two filter responses; below `floor`
// the test is vacuous and reported as Indeterminate.
SynchronyVerdict check_synchrony(const FilterPair& pair, const Vec& x1, const Vec& x2,
                                 double tol = 1e-6, double floor = 1e-8);

// (w1.x1) * (w2.x2)
double product_response(const FilterPair& pair, const Vec& x1, const Vec& x2);

// all pairwise responses w_i.x_i equal within relative tol
SynchronyVerdict sequence_synchrony(const std::vector<Vec>& filters,
                                    const std::vector<Vec>& frames,
                                    double tol = 1e-6, double floor = 1e-8);

// (sum_i w_i.x_i)^2; the inner sum is compensated so the square is accurate
// even under cancellation between frame responses
double energy_response(const std::vector<Vec>& filters, const std::vector<Vec>& frames);

// (w1.x1 + w2.x2) >= threshold; demonstrates why a thresholded sum cannot
// separate synchrony from a single strong match
bool thresholded_sum_response(const FilterPair& pair, const Vec& x1, const Vec& x2,
                              double threshold);

} // namespace stsync
