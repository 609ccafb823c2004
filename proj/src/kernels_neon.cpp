// NEON variants of the dense kernels (aarch64). NEON is baseline on arm64,
// so no runtime feature check is needed.

#include "kernels_detail.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)

#include <arm_neon.h>
#include <cstddef>

namespace stsync::kernels::detail {

namespace neon {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void matvec(const double* w, const double* x, double* out,
            std::size_t rows, std::size_t n) {
    for (std::size_t q = 0; q < rows; ++q) out[q] = dot(w + q * n, x, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) {
    float64x2_t va = vdupq_n_f64(alpha);
    float64x2_t vb = vdupq_n_f64(beta);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vy = vmulq_f64(vb, vld1q_f64(y + i));
        vst1q_f64(y + i, vfmaq_f64(vy, va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

double sum_sq(const double* a, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(a + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * a[i];
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double chi2(const double* a, const double* b, std::size_t n, double eps) {
    float64x2_t acc = vdupq_n_f64(0.0);
    float64x2_t veps = vdupq_n_f64(eps);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t va = vld1q_f64(a + i);
        float64x2_t vb = vld1q_f64(b + i);
        float64x2_t d = vsubq_f64(va, vb);
        float64x2_t s = vaddq_f64(vaddq_f64(va, vb), veps);
        acc = vaddq_f64(acc, vdivq_f64(vmulq_f64(d, d), s));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        s += d * d / (a[i] + b[i] + eps);
    }
    return 0.5 * s;
}

} // namespace neon

const KernelTable neon_table = {
    neon::dot, neon::matvec, neon::axpy, neon::axpby,
    neon::sum_sq, neon::squared_distance, neon::chi2,
};

} // namespace stsync::kernels::detail

#endif
