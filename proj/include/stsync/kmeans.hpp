#pragma once

#include <cstdint>
#include <vector>

#include "stsync/linalg.hpp"

namespace stsync {

struct Codebook {
    Mat centroids; // K x D
    std::uint64_t training_seed = 0;

    std::size_t k() const { return centroids.rows; }
    std::size_t dim() const { return centroids.cols; }
};

struct LloydResult {
    Codebook codebook;
    Vec objective_trace; // sum of squared distances per iteration
};

// Batch K-means with k-means++ seeding. Runs until assignment fixpoint or
// `iterations`, whichever comes first; empty clusters are re-seeded from a
// random sample. Rows of `data` are samples.
LloydResult lloyd_kmeans(const Mat& data, std::size_t k, std::uint64_t seed,
                         std::size_t iterations);

// nearest centroid by Euclidean distance, lowest-index tie-break
std::size_t nearest_centroid(const Codebook& cb, const Vec& x);

} // namespace stsync
