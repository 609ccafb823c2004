#include "stsync/kmeans.hpp"

#include <cmath>
#include <stdexcept>

#include "stsync/kernels.hpp"
#include "stsync/rng.hpp"

namespace stsync {

namespace {

std::size_t nearest_row(const Mat& centroids, const double* x, std::size_t n, double* dist_out) {
    std::size_t best = 0;
    double best_d = kernels::squared_distance(centroids.row(0), x, n);
    for (std::size_t k = 1; k < centroids.rows; ++k) {
        double d = kernels::squared_distance(centroids.row(k), x, n);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    if (dist_out) *dist_out = best_d;
    return best;
}

// k-means++: first centroid uniform, the rest proportional to squared
// distance from the nearest chosen centroid
Mat seed_plusplus(const Mat& data, std::size_t k, Rng& rng) {
    const std::size_t count = data.rows, n = data.cols;
    Mat centroids(k, n);

    std::size_t first = rng.uniform_index(count);
    std::copy(data.row(first), data.row(first) + n, centroids.row(0));

    Vec d2(count);
    for (std::size_t i = 0; i < count; ++i)
        d2[i] = kernels::squared_distance(data.row(i), centroids.row(0), n);

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t pick;
        if (total <= 0.0) {
            pick = rng.uniform_index(count);
        } else {
            double target = rng.uniform() * total;
            double acc = 0.0;
            pick = count - 1;
            for (std::size_t i = 0; i < count; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        }
        std::copy(data.row(pick), data.row(pick) + n, centroids.row(c));
        for (std::size_t i = 0; i < count; ++i) {
            double d = kernels::squared_distance(data.row(i), centroids.row(c), n);
            d2[i] = std::min(d2[i], d);
        }
    }
    return centroids;
}

} // namespace

LloydResult lloyd_kmeans(const Mat& data, std::size_t k, std::uint64_t seed,
                         std::size_t iterations) {
    if (k < 1) throw std::invalid_argument("lloyd_kmeans: k must be >= 1");
    if (data.rows < k)
        throw std::invalid_argument("lloyd_kmeans: fewer samples (" + std::to_string(data.rows) +
                                    ") than centroids (" + std::to_string(k) + ")");

    const std::size_t count = data.rows, n = data.cols;
    Rng rng(seed);
    Mat centroids = seed_plusplus(data, k, rng);

    std::vector<std::size_t> assign(count, 0);
    LloydResult res;
    res.codebook.training_seed = seed;

    for (std::size_t it = 0; it < iterations; ++it) {
        bool changed = false;
        double objective = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            double d = 0.0;
            std::size_t s = nearest_row(centroids, data.row(i), n, &d);
            objective += d;
            if (s != assign[i]) {
                assign[i] = s;
                changed = true;
            }
        }
        res.objective_trace.push_back(objective);
        if (!changed && it > 0) break;

        Mat sums(k, n);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < count; ++i) {
            kernels::axpy(1.0, data.row(i), sums.row(assign[i]), n);
            ++counts[assign[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                std::size_t pick = rng.uniform_index(count);
                std::copy(data.row(pick), data.row(pick) + n, centroids.row(c));
            } else {
                double inv = 1.0 / static_cast<double>(counts[c]);
                for (std::size_t j = 0; j < n; ++j) centroids(c, j) = sums(c, j) * inv;
            }
        }
    }

    res.codebook.centroids = std::move(centroids);
    return res;
}

std::size_t nearest_centroid(const Codebook& cb, const Vec& x) {
    if (x.size() != cb.dim()) throw std::invalid_argument("nearest_centroid: dimension mismatch");
    return nearest_row(cb.centroids, x.data(), x.size(), nullptr);
}

} // namespace stsync
