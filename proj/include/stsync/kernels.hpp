#pragma once

#include <cstddef>
#include <string>

namespace stsync::kernels {

// Dense double-precision kernels behind the hot loops (filter responses,
// centroid distances, histogram kernels). A scalar reference implementation
// always exists; a vectorized variant is selected at runtime when the CPU
// supports it. The two are equivalence-tested in tests/test_kernels.cpp.

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
bool backend_available(Backend b);

// Force a backend (mainly for equivalence tests). Throws if unavailable.
void set_backend(Backend b);
std::string backend_name(Backend b);

double dot(const double* a, const double* b, std::size_t n);

// out[q] = dot(w + q*n, x), q = 0..rows-1 (row-major matrix times vector)
void matvec(const double* w, const double* x, double* out,
            std::size_t rows, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

// y = alpha*x + beta*y
void axpby(double alpha, const double* x, double beta, double* y, std::size_t n);

double sum_sq(const double* a, std::size_t n);

double squared_distance(const double* a, const double* b, std::size_t n);

// 0.5 * sum (a-b)^2 / (a+b+eps)
double chi2(const double* a, const double* b, std::size_t n, double eps);

} // namespace stsync::kernels
