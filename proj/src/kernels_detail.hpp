#pragma once

#include <cstddef>

// Internal kernel tables. Each backend translation unit fills one of these.

namespace stsync::kernels::detail {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    void (*matvec)(const double*, const double*, double*, std::size_t, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*axpby)(double, const double*, double, double*, std::size_t);
    double (*sum_sq)(const double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
    double (*chi2)(const double*, const double*, std::size_t, double);
};

extern const KernelTable scalar_table;

#if defined(STSYNC_HAVE_AVX2_TU)
extern const KernelTable avx2_table;
bool avx2_supported();
#endif

#if defined(STSYNC_HAVE_NEON_TU)
extern const KernelTable neon_table;
#endif

} // namespace stsync::kernels::detail
