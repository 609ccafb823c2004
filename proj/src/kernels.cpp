#include "stsync/kernels.hpp"
#include "kernels_detail.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace stsync::kernels {

namespace detail {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void matvec(const double* w, const double* x, double* out,
            std::size_t rows, std::size_t n) {
    for (std::size_t q = 0; q < rows; ++q) out[q] = dot(w + q * n, x, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

double sum_sq(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double chi2(const double* a, const double* b, std::size_t n, double eps) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d / (a[i] + b[i] + eps);
    }
    return 0.5 * acc;
}

} // namespace scalar

const KernelTable scalar_table = {
    scalar::dot, scalar::matvec, scalar::axpy, scalar::axpby,
    scalar::sum_sq, scalar::squared_distance, scalar::chi2,
};

} // namespace detail

namespace {

const detail::KernelTable* pick_default() {
#if defined(STSYNC_HAVE_AVX2_TU)
    if (detail::avx2_supported()) return &detail::avx2_table;
#endif
#if defined(STSYNC_HAVE_NEON_TU)
    return &detail::neon_table;
#endif
    return &detail::scalar_table;
}

std::atomic<const detail::KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const detail::KernelTable* table() {
    const detail::KernelTable* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        t = pick_default();
        Backend b = Backend::Scalar;
#if defined(STSYNC_HAVE_AVX2_TU)
        if (t == &detail::avx2_table) b = Backend::Avx2;
#endif
#if defined(STSYNC_HAVE_NEON_TU)
        if (t == &detail::neon_table) b = Backend::Neon;
#endif
        g_backend.store(b, std::memory_order_relaxed);
        g_table.store(t, std::memory_order_release);
    }
    return t;
}

} // namespace

Backend active_backend() {
    table();
    return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) {
    switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#if defined(STSYNC_HAVE_AVX2_TU)
        return detail::avx2_supported();
#else
        return false;
#endif
    case Backend::Neon:
#if defined(STSYNC_HAVE_NEON_TU)
        return true;
#else
        return false;
#endif
    }
    return false;
}

void set_backend(Backend b) {
    if (!backend_available(b))
        throw std::runtime_error("kernel backend not available on this CPU: " + backend_name(b));
    const detail::KernelTable* t = &detail::scalar_table;
#if defined(STSYNC_HAVE_AVX2_TU)
    if (b == Backend::Avx2) t = &detail::avx2_table;
#endif
#if defined(STSYNC_HAVE_NEON_TU)
    if (b == Backend::Neon) t = &detail::neon_table;
#endif
    g_backend.store(b, std::memory_order_relaxed);
    g_table.store(t, std::memory_order_release);
}

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    }
    return "?";
}

double dot(const double* a, const double* b, std::size_t n) {
    return table()->dot(a, b, n);
}

void matvec(const double* w, const double* x, double* out,
            std::size_t rows, std::size_t n) {
    table()->matvec(w, x, out, rows, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    table()->axpy(alpha, x, y, n);
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) {
    table()->axpby(alpha, x, beta, y, n);
}

double sum_sq(const double* a, std::size_t n) {
    return table()->sum_sq(a, n);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    return table()->squared_distance(a, b, n);
}

double chi2(const double* a, const double* b, std::size_t n, double eps) {
    return table()->chi2(a, b, n, eps);
}

} // namespace stsync::kernels
