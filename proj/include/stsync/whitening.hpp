#pragma once

#include <cstddef>

#include "stsync/linalg.hpp"

namespace stsync {

// PCA whitening: forward = Lambda^{-1/2} E^T over the top retained_dims
// eigenpairs of the sample covariance, inverse = E Lambda^{1/2}.
struct WhiteningTransform {
    Vec mean;          // N
    Mat forward;       // D x N
    Mat inverse;       // N x D
    std::size_t retained_dims = 0;
    double eigenvalue_floor = 0.0;
    Vec eigenvalues;   // all N, descending (kept for diagnostics/round-trip checks)

    Vec apply(const Vec& x) const;          // D-vector
    Vec apply_inverse(const Vec& z) const;  // N-vector (mean re-added)
    std::size_t input_dim() const { return mean.size(); }
};

struct WhiteningOptions {
    std::size_t retained_dims = 0;     // 0 = choose by variance_fraction
    double variance_fraction = 0.99;
    double eigenvalue_floor_rel = 1e-8; // floor = rel * max eigenvalue
};

// rows of `data` are samples
WhiteningTransform fit_whitening(const Mat& data, const WhiteningOptions& opt = {});

// Plain PCA projection (no variance rescaling), used for descriptor reduction.
struct PcaProjection {
    Vec mean;        // N
    Mat components;  // D x N, rows are principal directions (descending variance)
    Vec eigenvalues; // all N, descending

    Vec project(const Vec& x) const; // D-vector
    std::size_t input_dim() const { return mean.size(); }
    std::size_t output_dim() const { return components.rows; }
};

PcaProjection fit_pca(const Mat& data, std::size_t dims);

} // namespace stsync
