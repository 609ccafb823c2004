#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stsync/dataset.hpp"
#include "stsync/linalg.hpp"
#include "stsync/skmeans.hpp" // ModelMode
#include "stsync/whitening.hpp"

namespace stsync {

// Synchrony autoencoder: gated encoder h = sigma(f^x . f^y) with cross-gated
// decoder and a closed-form contractive penalty. Sequence mode ties the two
// banks into one W over whole blocks, h = sigma((W X)^2).
struct SaeModel {
    ModelMode mode = ModelMode::Pair;
    bool tied = false; // pair mode only: Wy kept identical to Wx
    Mat wx, wy;        // pair mode, Q x N
    Mat w;             // sequence mode, Q x N
    double lambda = 0.5;
    std::optional<Dims3> frame_dims;

    std::size_t q() const { return mode == ModelMode::Pair ? wx.rows : w.rows; }
    std::size_t input_dim() const { return mode == ModelMode::Pair ? wx.cols : w.cols; }

    static SaeModel init_pair(std::size_t q, std::size_t n, std::uint64_t seed,
                              double lambda = 0.5, bool tied = false);
    static SaeModel init_sequence(std::size_t q, std::size_t n, std::uint64_t seed,
                                  double lambda = 0.5);
};

struct SaeActivations {
    Vec fx, fy; // factor responses; sequence mode uses fx = F, fy empty
    Vec h;      // hiddens, componentwise in (0,1)
};

// One training sample. Pair mode uses (x, y); sequence mode stores the
// whole block in x and leaves y empty.
struct SaeSample {
    Vec x, y;
};
using SaeBatch = std::vector<SaeSample>;

SaeActivations encode_pair(const SaeModel& m, const Vec& x, const Vec& y);

// xhat = Wx^T (h . f^y), yhat = Wy^T (h . f^x)  (cross-gated)
std::pair<Vec, Vec> decode_pair(const SaeModel& m, const SaeActivations& act);

// ||x - xhat||^2 + ||y - yhat||^2
double recon_loss(const SaeModel& m, const Vec& x, const Vec& y);

// closed-form Frobenius norm of the encoder Jacobian
double contraction_penalty(const SaeModel& m, const SaeActivations& act);

SaeActivations encode_seq(const SaeModel& m, const Vec& x);

struct LossParts {
    double recon = 0.0;
    double contraction = 0.0;
    double total = 0.0; // recon + lambda * contraction, exactly
};

LossParts loss_sample(const SaeModel& m, const SaeSample& s);
LossParts total_loss(const SaeModel& m, const SaeBatch& batch); // batch-averaged

struct SaeGradients {
    Mat gwx, gwy; // pair mode (tied: both filled, summed at apply time)
    Mat gw;       // sequence mode
};

// analytic gradient of the batch-averaged total loss
SaeGradients gradients(const SaeModel& m, const SaeBatch& batch);

struct SaeTrainConfig {
    double eta = 0.001;
    std::size_t epochs = 20;
    std::size_t batch = 128;
    double momentum = 0.9;
    std::uint64_t seed = 42;
};

struct SaeTrainResult {
    std::vector<LossParts> trace; // per epoch
    bool diverged = false;        // loss went non-finite; trace holds the finite prefix
};

SaeTrainResult train_sae(SaeModel& m, const PatchDataset& dataset, const SaeTrainConfig& cfg,
                         const WhiteningTransform& whitening);

// Central-difference check of `gradients` on a single sample. Checks every
// weight coordinate, or a seeded subsample of 500 when Q*N > 10^4. Returns
// the max relative discrepancy.
double finite_diff_check(const SaeModel& m, const SaeSample& sample, double step,
                         std::uint64_t subsample_seed = 0);

// ---- standard contractive autoencoder baseline ----
// h = sigma(W x), xhat = W^T h, plus the usual contractive penalty.
struct AeModel {
    Mat w;
    double lambda = 0.5;

    static AeModel init(std::size_t q, std::size_t n, std::uint64_t seed, double lambda = 0.5);
};

Vec ae_encode(const AeModel& m, const Vec& x);
LossParts ae_loss(const AeModel& m, const Vec& x);
Mat ae_gradient(const AeModel& m, const std::vector<Vec>& batch);
double ae_finite_diff_check(const AeModel& m, const Vec& x, double step);

SaeTrainResult train_ae(AeModel& m, const PatchDataset& dataset, const SaeTrainConfig& cfg,
                        const WhiteningTransform& whitening);

} // namespace stsync
