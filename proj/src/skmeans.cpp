#include "stsync/skmeans.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stsync/kernels.hpp"
#include "stsync/rng.hpp"

namespace stsync {

namespace {

Mat gaussian_rows(std::size_t q, std::size_t n, Rng& rng) {
    Mat m(q, n);
    for (auto& v : m.v) v = rng.normal();
    for (std::size_t r = 0; r < q; ++r) contrast_normalize_inplace(m.row(r), n);
    return m;
}

void check_finite(const Vec& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::size_t argmax_lowest_tie(const Vec& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

} // namespace

SkMeansModel SkMeansModel::init_pair(std::size_t q, std::size_t n, std::uint64_t seed) {
    if (q < 1 || n < 1) throw std::invalid_argument("SkMeansModel: q and n must be >= 1");
    Rng rng(seed);
    SkMeansModel m;
    m.mode = ModelMode::Pair;
    m.wx = gaussian_rows(q, n, rng);
    m.wy = gaussian_rows(q, n, rng);
    return m;
}

SkMeansModel SkMeansModel::init_sequence(std::size_t q, std::size_t n, std::uint64_t seed) {
    if (q < 1 || n < 1) throw std::invalid_argument("SkMeansModel: q and n must be >= 1");
    Rng rng(seed);
    SkMeansModel m;
    m.mode = ModelMode::Sequence;
    m.w = gaussian_rows(q, n, rng);
    return m;
}

std::size_t assign_pair(const SkMeansModel& m, const Vec& x, const Vec& y) {
    if (m.mode != ModelMode::Pair) throw std::invalid_argument("assign_pair: model is not pair mode");
    if (x.size() != m.wx.cols || y.size() != m.wy.cols)
        throw std::invalid_argument("assign_pair: input length mismatch");
    Vec fx(m.q()), fy(m.q());
    kernels::matvec(m.wx.v.data(), x.data(), fx.data(), m.q(), m.wx.cols);
    kernels::matvec(m.wy.v.data(), y.data(), fy.data(), m.q(), m.wy.cols);
    for (std::size_t i = 0; i < fx.size(); ++i) fx[i] *= fy[i];
    return argmax_lowest_tie(fx);
}

std::size_t assign_seq(const SkMeansModel& m, const Vec& x) {
    if (m.mode != ModelMode::Sequence) throw std::invalid_argument("assign_seq: model is not sequence mode");
    if (x.size() != m.w.cols) throw std::invalid_argument("assign_seq: input length mismatch");
    Vec f(m.q());
    kernels::matvec(m.w.v.data(), x.data(), f.data(), m.q(), m.w.cols);
    for (auto& v : f) v = v * v;
    return argmax_lowest_tie(f);
}

double loss_pair_x(const SkMeansModel& m, std::size_t s, const Vec& x, const Vec& y) {
    if (s >= m.q()) throw std::invalid_argument("loss_pair_x: unit index out of range");
    double c = kernels::dot(m.wy.row(s), y.data(), y.size());
    double acc = 0.0;
    const double* wx = m.wx.row(s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - wx[i] * c;
        acc += d * d;
    }
    return acc;
}

double loss_pair_y(const SkMeansModel& m, std::size_t s, const Vec& x, const Vec& y) {
    if (s >= m.q()) throw std::invalid_argument("loss_pair_y: unit index out of range");
    double c = kernels::dot(m.wx.row(s), x.data(), x.size());
    double acc = 0.0;
    const double* wy = m.wy.row(s);
    for (std::size_t i = 0; i < y.size(); ++i) {
        double d = y[i] - wy[i] * c;
        acc += d * d;
    }
    return acc;
}

double loss_seq(const SkMeansModel& m, std::size_t s, const Vec& x) {
    if (s >= m.q()) throw std::invalid_argument("loss_seq: unit index out of range");
    double c = kernels::dot(m.w.row(s), x.data(), x.size());
    double acc = 0.0;
    const double* w = m.w.row(s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - w[i] * c;
        acc += d * d;
    }
    return acc;
}

PairUpdate update_pair(SkMeansModel& m, const Vec& x, const Vec& y, double eta) {
    if (m.mode != ModelMode::Pair) throw std::invalid_argument("update_pair: model is not pair mode");
    check_finite(x, "update_pair");
    check_finite(y, "update_pair");

    PairUpdate res;
    res.s = assign_pair(m, x, y);
    res.loss_before = loss_pair_x(m, res.s, x, y) + loss_pair_y(m, res.s, x, y);

    // both row deltas from the same pre-update weights
    const std::size_t n = m.wx.cols;
    double cy = kernels::dot(m.wy.row(res.s), y.data(), n); // (Wy_s . y)
    double cx = kernels::dot(m.wx.row(res.s), x.data(), n); // (Wx_s . x)

    double* wx = m.wx.row(res.s);
    double* wy = m.wy.row(res.s);
    for (std::size_t i = 0; i < n; ++i) {
        double dx = eta * (x[i] * cy - wx[i] * cy * cy);
        double dy = eta * (y[i] * cx - wy[i] * cx * cx);
        wx[i] += dx;
        wy[i] += dy;
    }
    return res;
}

std::size_t update_seq(SkMeansModel& m, const Vec& x, double eta) {
    if (m.mode != ModelMode::Sequence) throw std::invalid_argument("update_seq: model is not sequence mode");
    check_finite(x, "update_seq");

    std::size_t s = assign_seq(m, x);
    const std::size_t n = m.w.cols;
    double c = kernels::dot(m.w.row(s), x.data(), n);
    double* w = m.w.row(s);
    for (std::size_t i = 0; i < n; ++i) w[i] += eta * (x[i] * c - w[i] * c * c);
    return s;
}

Vec infer_seq(const SkMeansModel& m, const Vec& x) {
    if (m.mode != ModelMode::Sequence) throw std::invalid_argument("infer_seq: model is not sequence mode");
    if (x.size() != m.w.cols) throw std::invalid_argument("infer_seq: input length mismatch");
    Vec h(m.q());
    kernels::matvec(m.w.v.data(), x.data(), h.data(), m.q(), m.w.cols);
    for (auto& v : h) v = sigmoid(v * v);
    return h;
}

Vec infer_pair(const SkMeansModel& m, const Vec& x, const Vec& y) {
    if (m.mode != ModelMode::Pair) throw std::invalid_argument("infer_pair: model is not pair mode");
    if (x.size() != m.wx.cols || y.size() != m.wy.cols)
        throw std::invalid_argument("infer_pair: input length mismatch");
    Vec fx(m.q()), fy(m.q());
    kernels::matvec(m.wx.v.data(), x.data(), fx.data(), m.q(), m.wx.cols);
    kernels::matvec(m.wy.v.data(), y.data(), fy.data(), m.q(), m.wy.cols);
    for (std::size_t i = 0; i < fx.size(); ++i) fx[i] = sigmoid(fx[i] * fy[i]);
    return fx;
}

namespace {

// Whiten every patch up front. Pair mode splits each 2-frame patch and
// whitens the frames independently; sequence mode whitens whole blocks.
struct WhitenedData {
    std::vector<Vec> xs; // sequence: block; pair: frame 0
    std::vector<Vec> ys; // pair only: frame 1
};

WhitenedData whiten_dataset(const PatchDataset& dataset, const WhiteningTransform& whitening,
                            ModelMode mode, std::size_t model_dim) {
    dataset.validate();
    if (dataset.patches.empty()) throw std::invalid_argument("train: empty dataset");
    Dims3 d = dataset.dims();

    if (whitening.retained_dims != model_dim)
        throw std::invalid_argument("train: whitening output does not match model dimension");

    WhitenedData out;
    if (mode == ModelMode::Sequence) {
        if (whitening.input_dim() != d.count())
            throw std::invalid_argument("train: whitening input does not match flattened patch size");
        out.xs.reserve(dataset.patches.size());
        for (const auto& p : dataset.patches) out.xs.push_back(whitening.apply(p.values));
    } else {
        if (d.t != 2) throw std::invalid_argument("train: pair mode needs 2-frame patches");
        std::size_t frame = d.h * d.w;
        if (whitening.input_dim() != frame)
            throw std::invalid_argument("train: whitening input does not match frame size");
        out.xs.reserve(dataset.patches.size());
        out.ys.reserve(dataset.patches.size());
        for (const auto& p : dataset.patches) {
            Vec f0(p.values.begin(), p.values.begin() + static_cast<long>(frame));
            Vec f1(p.values.begin() + static_cast<long>(frame), p.values.end());
            out.xs.push_back(whitening.apply(f0));
            out.ys.push_back(whitening.apply(f1));
        }
    }
    return out;
}

void normalize_rows(Mat& m) {
    for (std::size_t r = 0; r < m.rows; ++r) contrast_normalize_inplace(m.row(r), m.cols);
}

} // namespace

Vec train_skmeans(SkMeansModel& m, const PatchDataset& dataset, const TrainConfig& cfg,
                  const WhiteningTransform& whitening) {
    if (cfg.epochs < 1) throw std::invalid_argument("train_skmeans: epochs must be >= 1");
    if (!(cfg.eta >= 0.0)) throw std::invalid_argument("train_skmeans: eta must be >= 0");

    WhitenedData data = whiten_dataset(dataset, whitening, m.mode, m.input_dim());
    const std::size_t count = data.xs.size();

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});

    Vec trace;
    trace.reserve(cfg.epochs);
    double eta = cfg.eta;
    std::size_t updates = 0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        std::vector<bool> selected(m.q(), false);
        double loss_sum = 0.0;

        for (std::size_t idx : order) {
            if (m.mode == ModelMode::Sequence) {
                const Vec& x = data.xs[idx];
                std::size_t s = assign_seq(m, x);
                loss_sum += loss_seq(m, s, x);
                if (eta > 0.0) update_seq(m, x, eta);
                selected[s] = true;
            } else {
                PairUpdate u{assign_pair(m, data.xs[idx], data.ys[idx]), 0.0};
                u.loss_before = loss_pair_x(m, u.s, data.xs[idx], data.ys[idx]) +
                                loss_pair_y(m, u.s, data.xs[idx], data.ys[idx]);
                if (eta > 0.0) update_pair(m, data.xs[idx], data.ys[idx], eta);
                loss_sum += u.loss_before;
                selected[u.s] = true;
            }
            ++updates;
            if (eta > 0.0 && cfg.normalize_every > 0 && updates % cfg.normalize_every == 0) {
                if (m.mode == ModelMode::Sequence) {
                    normalize_rows(m.w);
                } else {
                    normalize_rows(m.wx);
                    normalize_rows(m.wy);
                }
            }
        }

        // re-seed dead units from random training sample projections
        if (eta > 0.0) {
            for (std::size_t qi = 0; qi < m.q(); ++qi) {
                if (selected[qi]) continue;
                std::size_t pick = rng.uniform_index(count);
                if (m.mode == ModelMode::Sequence) {
                    std::copy(data.xs[pick].begin(), data.xs[pick].end(), m.w.row(qi));
                    contrast_normalize_inplace(m.w.row(qi), m.w.cols);
                } else {
                    std::copy(data.xs[pick].begin(), data.xs[pick].end(), m.wx.row(qi));
                    std::copy(data.ys[pick].begin(), data.ys[pick].end(), m.wy.row(qi));
                    contrast_normalize_inplace(m.wx.row(qi), m.wx.cols);
                    contrast_normalize_inplace(m.wy.row(qi), m.wy.cols);
                }
            }
        }

        trace.push_back(loss_sum / static_cast<double>(count));
        eta *= cfg.eta_decay;
    }
    return trace;
}

WhiteningTransform fit_dataset_whitening(const PatchDataset& dataset, ModelMode mode,
                                         const WhiteningOptions& opt, std::size_t sample,
                                         std::uint64_t seed) {
    dataset.validate();
    if (dataset.patches.empty()) throw std::invalid_argument("fit_dataset_whitening: empty dataset");
    Dims3 d = dataset.dims();
    if (mode == ModelMode::Pair && d.t != 2)
        throw std::invalid_argument("fit_dataset_whitening: pair mode needs 2-frame patches");

    std::vector<std::size_t> picks(dataset.patches.size());
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    if (sample > 0 && sample < picks.size()) {
        Rng rng(seed);
        rng.shuffle(picks);
        picks.resize(sample);
    }

    const std::size_t frame = d.h * d.w;
    Mat rows = mode == ModelMode::Sequence ? Mat(picks.size(), d.count())
                                           : Mat(picks.size() * 2, frame);
    for (std::size_t i = 0; i < picks.size(); ++i) {
        const Vec& v = dataset.patches[picks[i]].values;
        if (mode == ModelMode::Sequence) {
            std::copy(v.begin(), v.end(), rows.row(i));
        } else {
            std::copy(v.begin(), v.begin() + static_cast<long>(frame), rows.row(2 * i));
            std::copy(v.begin() + static_cast<long>(frame), v.end(), rows.row(2 * i + 1));
        }
    }
    return fit_whitening(rows, opt);
}

std::size_t standard_kmeans_assign(const Mat& centroids, const Vec& x) {
    if (x.size() != centroids.cols) throw std::invalid_argument("kmeans assign: length mismatch");
    std::size_t best = 0;
    double best_d = kernels::squared_distance(centroids.row(0), x.data(), x.size());
    for (std::size_t qi = 1; qi < centroids.rows; ++qi) {
        double d = kernels::squared_distance(centroids.row(qi), x.data(), x.size());
        if (d < best_d) {
            best_d = d;
            best = qi;
        }
    }
    return best;
}

std::size_t standard_kmeans_update(Mat& centroids, const Vec& x, double eta) {
    std::size_t s = standard_kmeans_assign(centroids, x);
    double* w = centroids.row(s);
    for (std::size_t i = 0; i < x.size(); ++i) w[i] += eta * (x[i] - w[i]);
    return s;
}

Mat init_centroids(std::size_t q, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return gaussian_rows(q, n, rng);
}

Vec train_standard_kmeans(Mat& centroids, const PatchDataset& dataset, const TrainConfig& cfg,
                          const WhiteningTransform& whitening) {
    WhitenedData data = whiten_dataset(dataset, whitening, ModelMode::Sequence, centroids.cols);
    const std::size_t count = data.xs.size();

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});

    Vec trace;
    double eta = cfg.eta;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t idx : order) {
            const Vec& x = data.xs[idx];
            std::size_t s = standard_kmeans_assign(centroids, x);
            loss_sum += kernels::squared_distance(centroids.row(s), x.data(), x.size());
            if (eta > 0.0) {
                double* w = centroids.row(s);
                for (std::size_t i = 0; i < x.size(); ++i) w[i] += eta * (x[i] - w[i]);
            }
        }
        trace.push_back(loss_sum / static_cast<double>(count));
        eta *= cfg.eta_decay;
    }
    return trace;
}

Vec standard_kmeans_infer(const Mat& centroids, const Vec& x) {
    Vec z(centroids.rows);
    double mean = 0.0;
    for (std::size_t qi = 0; qi < centroids.rows; ++qi) {
        z[qi] = std::sqrt(kernels::squared_distance(centroids.row(qi), x.data(), x.size()));
        mean += z[qi];
    }
    mean /= static_cast<double>(centroids.rows);
    for (auto& v : z) v = std::max(0.0, mean - v);
    return z;
}

} // namespace stsync
