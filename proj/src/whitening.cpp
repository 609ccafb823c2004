#include "stsync/whitening.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "stsync/kernels.hpp"

namespace stsync {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EigDecomp {
    Vec mean;
    Vec eigenvalues;    // descending
    RowMat eigenvectors; // column j = direction for eigenvalues[j]
};

EigDecomp covariance_eig(const Mat& data) {
    if (data.rows < 2) throw std::invalid_argument("PCA: need at least 2 samples");
    const std::size_t p = data.rows, n = data.cols;

    Eigen::Map<const RowMat> x(data.v.data(), static_cast<Eigen::Index>(p),
                               static_cast<Eigen::Index>(n));
    Eigen::RowVectorXd mean = x.colwise().mean();
    RowMat centered = x.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(p - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("PCA: eigendecomposition failed");

    // Eigen returns ascending order; flip to descending.
    EigDecomp out;
    out.mean.assign(mean.data(), mean.data() + n);
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = n - 1 - j;
        out.eigenvalues[j] = solver.eigenvalues()(static_cast<Eigen::Index>(src));
        out.eigenvectors.col(static_cast<Eigen::Index>(j)) =
            solver.eigenvectors().col(static_cast<Eigen::Index>(src));
    }
    return out;
}

std::size_t numerical_rank(const Vec& eigenvalues) {
    if (eigenvalues.empty()) return 0;
    double cutoff = std::max(eigenvalues.front(), 0.0) * 1e-10;
    std::size_t rank = 0;
    for (double e : eigenvalues)
        if (e > cutoff) ++rank;
    return rank;
}

std::size_t dims_for_variance(const Vec& eigenvalues, double fraction) {
    double total = 0.0;
    for (double e : eigenvalues) total += std::max(e, 0.0);
    if (total <= 0.0) return 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        acc += std::max(eigenvalues[i], 0.0);
        if (acc >= fraction * total) return i + 1;
    }
    return eigenvalues.size();
}

} // namespace

Vec WhiteningTransform::apply(const Vec& x) const {
    if (x.size() != mean.size()) throw std::invalid_argument("whitening: input length mismatch");
    Vec centered(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - mean[i];
    Vec out(retained_dims);
    kernels::matvec(forward.v.data(), centered.data(), out.data(), retained_dims, x.size());
    return out;
}

Vec WhiteningTransform::apply_inverse(const Vec& z) const {
    if (z.size() != retained_dims) throw std::invalid_argument("whitening: projected length mismatch");
    Vec out(mean);
    // inverse is N x D; accumulate column-wise
    for (std::size_t j = 0; j < retained_dims; ++j)
        for (std::size_t i = 0; i < mean.size(); ++i) out[i] += inverse(i, j) * z[j];
    return out;
}

WhiteningTransform fit_whitening(const Mat& data, const WhiteningOptions& opt) {
    const std::size_t n = data.cols;
    if (opt.retained_dims > n)
        throw std::invalid_argument("fit_whitening: retained_dims exceeds input dimension");

    EigDecomp eig = covariance_eig(data);
    std::size_t rank = numerical_rank(eig.eigenvalues);

    std::size_t d = opt.retained_dims;
    if (d == 0) {
        d = std::min(dims_for_variance(eig.eigenvalues, opt.variance_fraction), rank);
        d = std::max<std::size_t>(d, 1);
    } else if (d > rank) {
        throw std::invalid_argument("fit_whitening: retained_dims " + std::to_string(d) +
                                    " exceeds numerical rank " + std::to_string(rank));
    }
    if (data.rows <= d)
        throw std::invalid_argument("fit_whitening: need more samples than retained dimensions");

    WhiteningTransform w;
    w.mean = eig.mean;
    w.eigenvalues = eig.eigenvalues;
    w.retained_dims = d;
    w.eigenvalue_floor = opt.eigenvalue_floor_rel * std::max(eig.eigenvalues.front(), 0.0);

    w.forward = Mat(d, n);
    w.inverse = Mat(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        double lambda = std::max(eig.eigenvalues[j], w.eigenvalue_floor);
        double inv_sqrt = 1.0 / std::sqrt(lambda);
        double sqrt_l = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i) {
            double e = eig.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            w.forward(j, i) = inv_sqrt * e;
            w.inverse(i, j) = sqrt_l * e;
        }
    }
    return w;
}

Vec PcaProjection::project(const Vec& x) const {
    if (x.size() != mean.size()) throw std::invalid_argument("pca: input length mismatch");
    Vec centered(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - mean[i];
    Vec out(components.rows);
    kernels::matvec(components.v.data(), centered.data(), out.data(), components.rows, x.size());
    return out;
}

PcaProjection fit_pca(const Mat& data, std::size_t dims) {
    if (dims == 0 || dims > data.cols)
        throw std::invalid_argument("fit_pca: invalid target dimension");
    if (data.rows <= dims)
        throw std::invalid_argument("fit_pca: need more samples than target dimensions");

    EigDecomp eig = covariance_eig(data);
    std::size_t rank = numerical_rank(eig.eigenvalues);
    if (dims > rank)
        throw std::invalid_argument("fit_pca: requested " + std::to_string(dims) +
                                    " components but numerical rank is " + std::to_string(rank));

    PcaProjection p;
    p.mean = eig.mean;
    p.eigenvalues = eig.eigenvalues;
    p.components = Mat(dims, data.cols);
    for (std::size_t j = 0; j < dims; ++j)
        for (std::size_t i = 0; i < data.cols; ++i)
            p.components(j, i) =
                eig.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return p;
}

} // namespace stsync
