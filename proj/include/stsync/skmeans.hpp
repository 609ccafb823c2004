#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "stsync/dataset.hpp"
#include "stsync/linalg.hpp"
#include "stsync/video.hpp"
#include "stsync/whitening.hpp"

namespace stsync {

enum class ModelMode { Pair, Sequence };

// Synchrony K-means: gated winner-take-all assignment with local Hebbian /
// active-forgetting updates. Pair mode keeps two filter banks Wx, Wy over
// single frames; sequence mode keeps one bank W over whole (whitened) blocks.
struct SkMeansModel {
    ModelMode mode = ModelMode::Sequence;
    Mat wx, wy; // pair mode, Q x N each
    Mat w;      // sequence mode, Q x N
    std::optional<Dims3> frame_dims; // pre-whitening block geometry, for viz

    std::size_t q() const { return mode == ModelMode::Pair ? wx.rows : w.rows; }
    std::size_t input_dim() const { return mode == ModelMode::Pair ? wx.cols : w.cols; }

    // rows drawn from a seeded unit Gaussian, then contrast-normalized
    static SkMeansModel init_pair(std::size_t q, std::size_t n, std::uint64_t seed);
    static SkMeansModel init_sequence(std::size_t q, std::size_t n, std::uint64_t seed);
};

// argmax_q (Wx_q.x)(Wy_q.y); ties broken by lowest index
std::size_t assign_pair(const SkMeansModel& m, const Vec& x, const Vec& y);

// argmax_q (W_q.X)^2; ties broken by lowest index
std::size_t assign_seq(const SkMeansModel& m, const Vec& x);

// ||x - Wx_s (Wy_s.y)||^2
double loss_pair_x(const SkMeansModel& m, std::size_t s, const Vec& x, const Vec& y);
// ||y - Wy_s (Wx_s.x)||^2
double loss_pair_y(const SkMeansModel& m, std::size_t s, const Vec& x, const Vec& y);

// ||X - W_s (W_s.X)||^2
double loss_seq(const SkMeansModel& m, std::size_t s, const Vec& x);

struct PairUpdate {
    std::size_t s = 0;
    double loss_before = 0.0; // L_x + L_y at the pre-update weights
};

// Delta Wx_s = eta (x (Wy_s.y) - Wx_s (Wy_s.y)^2), symmetric for Wy_s.
// Both row updates are computed from the same pre-update weights.
PairUpdate update_pair(SkMeansModel& m, const Vec& x, const Vec& y, double eta);

// Delta W_s = eta (X (W_s.X) - W_s (W_s.X)^2)
std::size_t update_seq(SkMeansModel& m, const Vec& x, double eta);

// sigmoid-of-square hiddens (sequence) / sigmoid-of-product (pair)
Vec infer_seq(const SkMeansModel& m, const Vec& x);
Vec infer_pair(const SkMeansModel& m, const Vec& x, const Vec& y);

struct TrainConfig {
    double eta = 0.01;
    std::size_t epochs = 5;
    std::uint64_t seed = 42;
    std::size_t normalize_every = 1000;
    double eta_decay = 0.95;
};

// One seeded shuffled pass per epoch over the whitened patches. Returns the
// mean assigned-unit loss per epoch. Rows never selected within an epoch are
// re-seeded from a random training sample projection.
Vec train_skmeans(SkMeansModel& m, const PatchDataset& dataset, const TrainConfig& cfg,
                  const WhiteningTransform& whitening);

// Fit whitening in the layout the given mode trains on: sequence mode over
// whole flattened blocks, pair mode over individual frames. sample > 0 caps
// the rows used for the covariance (seeded subsample without replacement).
WhiteningTransform fit_dataset_whitening(const PatchDataset& dataset, ModelMode mode,
                                         const WhiteningOptions& opt, std::size_t sample = 0,
                                         std::uint64_t seed = 0);

// ---- standard online K-means baseline ----

std::size_t standard_kmeans_assign(const Mat& centroids, const Vec& x);

// winner moves toward x: Delta W_s = eta (x - W_s)
std::size_t standard_kmeans_update(Mat& centroids, const Vec& x, double eta);

Mat init_centroids(std::size_t q, std::size_t n, std::uint64_t seed);

Vec train_standard_kmeans(Mat& centroids, const PatchDataset& dataset, const TrainConfig& cfg,
                          const WhiteningTransform& whitening);

// triangle activation features: f_q = max(0, mean_z - z_q), z_q = ||x - W_q||
Vec standard_kmeans_infer(const Mat& centroids, const Vec& x);

} // namespace stsync
