#include "stsync/sae.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stsync/kernels.hpp"
#include "stsync/rng.hpp"

namespace stsync {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Mat gaussian_rows(std::size_t q, std::size_t n, Rng& rng, double scale) {
    Mat m(q, n);
    for (auto& v : m.v) v = scale * rng.normal();
    return m;
}

Vec row_sum_sq(const Mat& m) {
    Vec s(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) s[r] = kernels::sum_sq(m.row(r), m.cols);
    return s;
}

void check_sample(const SaeModel& m, const SaeSample& s) {
    if (m.mode == ModelMode::Pair) {
        if (s.x.size() != m.wx.cols || s.y.size() != m.wy.cols)
            throw std::invalid_argument("sae: sample length mismatch");
    } else {
        if (s.x.size() != m.w.cols || !s.y.empty())
            throw std::invalid_argument("sae: sample length mismatch");
    }
}

} // namespace

SaeModel SaeModel::init_pair(std::size_t q, std::size_t n, std::uint64_t seed,
                             double lambda, bool tied) {
    if (q < 1 || n < 1) throw std::invalid_argument("SaeModel: q and n must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("SaeModel: lambda must be >= 0");
    Rng rng(seed);
    SaeModel m;
    m.mode = ModelMode::Pair;
    m.tied = tied;
    m.lambda = lambda;
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    m.wx = gaussian_rows(q, n, rng, scale);
    m.wy = tied ? m.wx : gaussian_rows(q, n, rng, scale);
    return m;
}

SaeModel SaeModel::init_sequence(std::size_t q, std::size_t n, std::uint64_t seed, double lambda) {
    if (q < 1 || n < 1) throw std::invalid_argument("SaeModel: q and n must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("SaeModel: lambda must be >= 0");
    Rng rng(seed);
    SaeModel m;
    m.mode = ModelMode::Sequence;
    m.lambda = lambda;
    m.w = gaussian_rows(q, n, rng, 1.0 / std::sqrt(static_cast<double>(n)));
    return m;
}

SaeActivations encode_pair(const SaeModel& m, const Vec& x, const Vec& y) {
    if (m.mode != ModelMode::Pair) throw std::invalid_argument("encode_pair: model is not pair mode");
    if (x.size() != m.wx.cols || y.size() != m.wy.cols)
        throw std::invalid_argument("encode_pair: input length mismatch");
    SaeActivations act;
    act.fx.resize(m.q());
    act.fy.resize(m.q());
    act.h.resize(m.q());
    kernels::matvec(m.wx.v.data(), x.data(), act.fx.data(), m.q(), m.wx.cols);
    kernels::matvec(m.wy.v.data(), y.data(), act.fy.data(), m.q(), m.wy.cols);
    for (std::size_t i = 0; i < m.q(); ++i) act.h[i] = sigmoid(act.fx[i] * act.fy[i]);
    return act;
}

std::pair<Vec, Vec> decode_pair(const SaeModel& m, const SaeActivations& act) {
    if (m.mode != ModelMode::Pair) throw std::invalid_argument("decode_pair: model is not pair mode");
    const std::size_t n = m.wx.cols, q = m.q();
    Vec xhat(n, 0.0), yhat(n, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        kernels::axpy(act.h[j] * act.fy[j], m.wx.row(j), xhat.data(), n);
        kernels::axpy(act.h[j] * act.fx[j], m.wy.row(j), yhat.data(), n);
    }
    return {std::move(xhat), std::move(yhat)};
}

double recon_loss(const SaeModel& m, const Vec& x, const Vec& y) {
    SaeActivations act = encode_pair(m, x, y);
    auto [xhat, yhat] = decode_pair(m, act);
    return kernels::squared_distance(x.data(), xhat.data(), x.size()) +
           kernels::squared_distance(y.data(), yhat.data(), y.size());
}

double contraction_penalty(const SaeModel& m, const SaeActivations& act) {
    const std::size_t q = m.q();
    double c = 0.0;
    if (m.mode == ModelMode::Pair) {
        Vec sx = row_sum_sq(m.wx), sy = row_sum_sq(m.wy);
        for (std::size_t j = 0; j < q; ++j) {
            double hp = act.h[j] * (1.0 - act.h[j]);
            c += hp * hp * (act.fx[j] * act.fx[j] * sy[j] + act.fy[j] * act.fy[j] * sx[j]);
        }
    } else {
        // dh_q/dX_i = h'_q * 2 F_q * W_qi, so the Frobenius norm is
        // sum_q 4 h'^2 F^2 ||W_q||^2
        Vec s = row_sum_sq(m.w);
        for (std::size_t j = 0; j < q; ++j) {
            double hp = act.h[j] * (1.0 - act.h[j]);
            c += 4.0 * hp * hp * act.fx[j] * act.fx[j] * s[j];
        }
    }
    return c;
}

SaeActivations encode_seq(const SaeModel& m, const Vec& x) {
    if (m.mode != ModelMode::Sequence) throw std::invalid_argument("encode_seq: model is not sequence mode");
    if (x.size() != m.w.cols) throw std::invalid_argument("encode_seq: input length mismatch");
    SaeActivations act;
    act.fx.resize(m.q());
    act.h.resize(m.q());
    kernels::matvec(m.w.v.data(), x.data(), act.fx.data(), m.q(), m.w.cols);
    for (std::size_t i = 0; i < m.q(); ++i) act.h[i] = sigmoid(act.fx[i] * act.fx[i]);
    return act;
}

LossParts loss_sample(const SaeModel& m, const SaeSample& s) {
    check_sample(m, s);
    LossParts out;
    if (m.mode == ModelMode::Pair) {
        SaeActivations act = encode_pair(m, s.x, s.y);
        auto [xhat, yhat] = decode_pair(m, act);
        out.recon = kernels::squared_distance(s.x.data(), xhat.data(), s.x.size()) +
                    kernels::squared_distance(s.y.data(), yhat.data(), s.y.size());
        out.contraction = contraction_penalty(m, act);
    } else {
        SaeActivations act = encode_seq(m, s.x);
        const std::size_t n = m.w.cols;
        Vec xhat(n, 0.0);
        for (std::size_t j = 0; j < m.q(); ++j)
            kernels::axpy(act.h[j] * act.fx[j], m.w.row(j), xhat.data(), n);
        out.recon = kernels::squared_distance(s.x.data(), xhat.data(), n);
        out.contraction = contraction_penalty(m, act);
    }
    out.total = out.recon + m.lambda * out.contraction;
    return out;
}

LossParts total_loss(const SaeModel& m, const SaeBatch& batch) {
    if (batch.empty()) throw std::invalid_argument("total_loss: empty batch");
    LossParts acc;
    for (const auto& s : batch) {
        LossParts p = loss_sample(m, s);
        acc.recon += p.recon;
        acc.contraction += p.contraction;
    }
    double inv = 1.0 / static_cast<double>(batch.size());
    acc.recon *= inv;
    acc.contraction *= inv;
    acc.total = acc.recon + m.lambda * acc.contraction;
    return acc;
}

namespace {

// per-sample gradient accumulation, pair mode
void accumulate_pair_grad(const SaeModel& m, const SaeSample& s, const Vec& sx, const Vec& sy,
                          Mat& gwx, Mat& gwy) {
    const std::size_t q = m.q(), n = m.wx.cols;
    SaeActivations act = encode_pair(m, s.x, s.y);
    auto [xhat, yhat] = decode_pair(m, act);

    Vec rx(n), ry(n);
    for (std::size_t i = 0; i < n; ++i) {
        rx[i] = xhat[i] - s.x[i];
        ry[i] = yhat[i] - s.y[i];
    }
    Vec ax(q), ay(q); // Wx rx, Wy ry
    kernels::matvec(m.wx.v.data(), rx.data(), ax.data(), q, n);
    kernels::matvec(m.wy.v.data(), ry.data(), ay.data(), q, n);

    for (std::size_t j = 0; j < q; ++j) {
        double h = act.h[j], fx = act.fx[j], fy = act.fy[j];
        double hp = h * (1.0 - h);
        double cross = ax[j] * fy + ay[j] * fx;

        // reconstruction
        double gamma = 2.0 * (hp * fy * cross + ay[j] * h);
        double delta = 2.0 * (hp * fx * cross + ax[j] * h);
        kernels::axpy(2.0 * h * fy, rx.data(), gwx.row(j), n);
        kernels::axpy(gamma, s.x.data(), gwx.row(j), n);
        kernels::axpy(2.0 * h * fx, ry.data(), gwy.row(j), n);
        kernels::axpy(delta, s.y.data(), gwy.row(j), n);

        // contraction: C_j = A (fx^2 Sy + fy^2 Sx), A = hp^2
        if (m.lambda != 0.0) {
            double a = hp * hp;
            double ap = 2.0 * hp * hp * (1.0 - 2.0 * h); // dA/du, u = fx*fy
            double body = fx * fx * sy[j] + fy * fy * sx[j];
            double cx = m.lambda * (ap * fy * body + a * 2.0 * fx * sy[j]);
            double cy = m.lambda * (ap * fx * body + a * 2.0 * fy * sx[j]);
            kernels::axpy(cx, s.x.data(), gwx.row(j), n);
            kernels::axpy(cy, s.y.data(), gwy.row(j), n);
            kernels::axpy(m.lambda * a * fy * fy * 2.0, m.wx.row(j), gwx.row(j), n);
            kernels::axpy(m.lambda * a * fx * fx * 2.0, m.wy.row(j), gwy.row(j), n);
        }
    }
}

void accumulate_seq_grad(const SaeModel& m, const SaeSample& s, const Vec& sw, Mat& gw) {
    const std::size_t q = m.q(), n = m.w.cols;
    SaeActivations act = encode_seq(m, s.x);

    Vec xhat(n, 0.0);
    for (std::size_t j = 0; j < q; ++j)
        kernels::axpy(act.h[j] * act.fx[j], m.w.row(j), xhat.data(), n);

    Vec r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = xhat[i] - s.x[i];
    Vec a(q);
    kernels::matvec(m.w.v.data(), r.data(), a.data(), q, n);

    for (std::size_t j = 0; j < q; ++j) {
        double h = act.h[j], f = act.fx[j];
        double hp = h * (1.0 - h);

        // reconstruction
        double gamma = 2.0 * a[j] * (2.0 * f * f * hp + h);
        kernels::axpy(2.0 * h * f, r.data(), gw.row(j), n);
        kernels::axpy(gamma, s.x.data(), gw.row(j), n);

        // contraction: C_j = 4 hp^2 f^2 S_j
        if (m.lambda != 0.0) {
            double db_df = 2.0 * f * hp * hp * (2.0 * f * f * (1.0 - 2.0 * h) + 1.0);
            kernels::axpy(m.lambda * 4.0 * db_df * sw[j], s.x.data(), gw.row(j), n);
            kernels::axpy(m.lambda * 4.0 * hp * hp * f * f * 2.0, m.w.row(j), gw.row(j), n);
        }
    }
}

} // namespace

SaeGradients gradients(const SaeModel& m, const SaeBatch& batch) {
    if (batch.empty()) throw std::invalid_argument("gradients: empty batch");
    for (const auto& s : batch) {
        check_sample(m, s);
        for (double v : s.x)
            if (!std::isfinite(v)) throw std::invalid_argument("gradients: non-finite sample");
        for (double v : s.y)
            if (!std::isfinite(v)) throw std::invalid_argument("gradients: non-finite sample");
    }

    SaeGradients g;
    if (m.mode == ModelMode::Pair) {
        g.gwx = Mat(m.q(), m.wx.cols);
        g.gwy = Mat(m.q(), m.wy.cols);
        Vec sx = row_sum_sq(m.wx), sy = row_sum_sq(m.wy);
        for (const auto& s : batch) accumulate_pair_grad(m, s, sx, sy, g.gwx, g.gwy);
        double inv = 1.0 / static_cast<double>(batch.size());
        for (auto& v : g.gwx.v) v *= inv;
        for (auto& v : g.gwy.v) v *= inv;
    } else {
        g.gw = Mat(m.q(), m.w.cols);
        Vec sw = row_sum_sq(m.w);
        for (const auto& s : batch) accumulate_seq_grad(m, s, sw, g.gw);
        double inv = 1.0 / static_cast<double>(batch.size());
        for (auto& v : g.gw.v) v *= inv;
    }
    return g;
}

namespace {

struct WhitenedSae {
    SaeBatch samples;
};

WhitenedSae whiten_for_sae(const SaeModel& m, const PatchDataset& dataset,
                           const WhiteningTransform& whitening) {
    dataset.validate();
    if (dataset.patches.empty()) throw std::invalid_argument("train_sae: empty dataset");
    Dims3 d = dataset.dims();
    if (whitening.retained_dims != m.input_dim())
        throw std::invalid_argument("train_sae: whitening output does not match model dimension");

    WhitenedSae out;
    out.samples.reserve(dataset.patches.size());
    if (m.mode == ModelMode::Sequence) {
        if (whitening.input_dim() != d.count())
            throw std::invalid_argument("train_sae: whitening input does not match flattened patch size");
        for (const auto& p : dataset.patches) out.samples.push_back({whitening.apply(p.values), {}});
    } else {
        if (d.t != 2) throw std::invalid_argument("train_sae: pair mode needs 2-frame patches");
        std::size_t frame = d.h * d.w;
        if (whitening.input_dim() != frame)
            throw std::invalid_argument("train_sae: whitening input does not match frame size");
        for (const auto& p : dataset.patches) {
            Vec f0(p.values.begin(), p.values.begin() + static_cast<long>(frame));
            Vec f1(p.values.begin() + static_cast<long>(frame), p.values.end());
            out.samples.push_back({whitening.apply(f0), whitening.apply(f1)});
        }
    }
    return out;
}

// shared momentum-SGD loop over mini-batches; `step` applies one batch
template <typename LossFn, typename StepFn>
SaeTrainResult sgd_loop(std::size_t count, std::size_t epochs, std::size_t batch_size,
                        std::uint64_t seed, LossFn&& epoch_loss, StepFn&& step) {
    Rng rng(seed);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});

    SaeTrainResult res;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < count; start += batch_size) {
            std::size_t end = std::min(count, start + batch_size);
            step(order, start, end);
        }
        LossParts p = epoch_loss();
        if (!std::isfinite(p.total)) {
            res.diverged = true;
            return res;
        }
        res.trace.push_back(p);
    }
    return res;
}

} // namespace

SaeTrainResult train_sae(SaeModel& m, const PatchDataset& dataset, const SaeTrainConfig& cfg,
                         const WhiteningTransform& whitening) {
    if (cfg.epochs < 1 || cfg.batch < 1) throw std::invalid_argument("train_sae: bad config");
    WhitenedSae data = whiten_for_sae(m, dataset, whitening);
    const std::size_t count = data.samples.size();

    Mat vx(m.q(), m.input_dim()), vy(m.q(), m.input_dim()), vw(m.q(), m.input_dim());

    auto step = [&](const std::vector<std::size_t>& order, std::size_t start, std::size_t end) {
        SaeBatch batch;
        batch.reserve(end - start);
        for (std::size_t i = start; i < end; ++i) batch.push_back(data.samples[order[i]]);
        SaeGradients g = gradients(m, batch);
        if (m.mode == ModelMode::Pair) {
            if (m.tied) {
                // tied weights share one gradient: sum of both partials
                for (std::size_t i = 0; i < vx.v.size(); ++i) {
                    vx.v[i] = cfg.momentum * vx.v[i] - cfg.eta * (g.gwx.v[i] + g.gwy.v[i]);
                    m.wx.v[i] += vx.v[i];
                }
                m.wy = m.wx;
            } else {
                for (std::size_t i = 0; i < vx.v.size(); ++i) {
                    vx.v[i] = cfg.momentum * vx.v[i] - cfg.eta * g.gwx.v[i];
                    m.wx.v[i] += vx.v[i];
                    vy.v[i] = cfg.momentum * vy.v[i] - cfg.eta * g.gwy.v[i];
                    m.wy.v[i] += vy.v[i];
                }
            }
        } else {
            for (std::size_t i = 0; i < vw.v.size(); ++i) {
                vw.v[i] = cfg.momentum * vw.v[i] - cfg.eta * g.gw.v[i];
                m.w.v[i] += vw.v[i];
            }
        }
    };
    auto epoch_loss = [&]() { return total_loss(m, data.samples); };
    return sgd_loop(count, cfg.epochs, cfg.batch, cfg.seed, epoch_loss, step);
}

double finite_diff_check(const SaeModel& m, const SaeSample& sample, double step,
                         std::uint64_t subsample_seed) {
    check_sample(m, sample);
    SaeBatch batch{sample};
    SaeGradients g = gradients(m, batch);

    struct Slot {
        Mat* w;
        const Mat* gm;
    };
    SaeModel probe = m;
    std::vector<Slot> slots;
    if (m.mode == ModelMode::Pair) {
        if (m.tied) {
            // a tied coordinate moves in both banks at once
            slots.push_back({&probe.wx, &g.gwx});
        } else {
            slots.push_back({&probe.wx, &g.gwx});
            slots.push_back({&probe.wy, &g.gwy});
        }
    } else {
        slots.push_back({&probe.w, &g.gw});
    }

    double gmax = 0.0;
    for (const auto& slot : slots)
        for (double v : slot.gm->v) gmax = std::max(gmax, std::fabs(v));
    if (m.mode == ModelMode::Pair && m.tied)
        for (std::size_t i = 0; i < g.gwy.v.size(); ++i)
            gmax = std::max(gmax, std::fabs(g.gwx.v[i] + g.gwy.v[i]));

    const std::size_t total = m.q() * m.input_dim();
    std::vector<std::size_t> coords;
    if (total > 10000) {
        Rng rng(subsample_seed);
        coords.resize(500);
        for (auto& c : coords) c = rng.uniform_index(total);
    } else {
        coords.resize(total);
        std::iota(coords.begin(), coords.end(), std::size_t{0});
    }

    double max_rel = 0.0;
    for (const auto& slot : slots) {
        for (std::size_t c : coords) {
            double saved = slot.w->v[c];
            double* tied_other = nullptr;
            double tied_saved = 0.0;
            if (m.mode == ModelMode::Pair && m.tied) {
                tied_other = &probe.wy.v[c];
                tied_saved = *tied_other;
            }

            slot.w->v[c] = saved + step;
            if (tied_other) *tied_other = tied_saved + step;
            double lp = total_loss(probe, batch).total;
            slot.w->v[c] = saved - step;
            if (tied_other) *tied_other = tied_saved - step;
            double lm = total_loss(probe, batch).total;
            slot.w->v[c] = saved;
            if (tied_other) *tied_other = tied_saved;

            double numeric = (lp - lm) / (2.0 * step);
            double analytic = slot.gm->v[c];
            if (m.mode == ModelMode::Pair && m.tied) analytic = g.gwx.v[c] + g.gwy.v[c];

            double denom = std::max({std::fabs(numeric), std::fabs(analytic), 1e-8 * gmax, 1e-12});
            max_rel = std::max(max_rel, std::fabs(numeric - analytic) / denom);
        }
    }
    return max_rel;
}

// ---- standard contractive autoencoder baseline ----

AeModel AeModel::init(std::size_t q, std::size_t n, std::uint64_t seed, double lambda) {
    Rng rng(seed);
    AeModel m;
    m.lambda = lambda;
    m.w = gaussian_rows(q, n, rng, 1.0 / std::sqrt(static_cast<double>(n)));
    return m;
}

Vec ae_encode(const AeModel& m, const Vec& x) {
    if (x.size() != m.w.cols) throw std::invalid_argument("ae_encode: input length mismatch");
    Vec h(m.w.rows);
    kernels::matvec(m.w.v.data(), x.data(), h.data(), m.w.rows, m.w.cols);
    for (auto& v : h) v = sigmoid(v);
    return h;
}

LossParts ae_loss(const AeModel& m, const Vec& x) {
    const std::size_t q = m.w.rows, n = m.w.cols;
    Vec h = ae_encode(m, x);
    Vec xhat(n, 0.0);
    for (std::size_t j = 0; j < q; ++j) kernels::axpy(h[j], m.w.row(j), xhat.data(), n);

    LossParts p;
    p.recon = kernels::squared_distance(x.data(), xhat.data(), n);
    Vec s = row_sum_sq(m.w);
    for (std::size_t j = 0; j < q; ++j) {
        double hp = h[j] * (1.0 - h[j]);
        p.contraction += hp * hp * s[j];
    }
    p.total = p.recon + m.lambda * p.contraction;
    return p;
}

Mat ae_gradient(const AeModel& m, const std::vector<Vec>& batch) {
    if (batch.empty()) throw std::invalid_argument("ae_gradient: empty batch");
    const std::size_t q = m.w.rows, n = m.w.cols;
    Mat g(q, n);
    Vec s = row_sum_sq(m.w);

    for (const Vec& x : batch) {
        Vec h = ae_encode(m, x);
        Vec xhat(n, 0.0);
        for (std::size_t j = 0; j < q; ++j) kernels::axpy(h[j], m.w.row(j), xhat.data(), n);
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = xhat[i] - x[i];
        Vec a(q);
        kernels::matvec(m.w.v.data(), r.data(), a.data(), q, n);

        for (std::size_t j = 0; j < q; ++j) {
            double hp = h[j] * (1.0 - h[j]);
            kernels::axpy(2.0 * h[j], r.data(), g.row(j), n);
            kernels::axpy(2.0 * a[j] * hp, x.data(), g.row(j), n);
            if (m.lambda != 0.0) {
                double coeff = m.lambda * 2.0 * hp * hp * (1.0 - 2.0 * h[j]) * s[j];
                kernels::axpy(coeff, x.data(), g.row(j), n);
                kernels::axpy(m.lambda * 2.0 * hp * hp, m.w.row(j), g.row(j), n);
            }
        }
    }
    double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& v : g.v) v *= inv;
    return g;
}

double ae_finite_diff_check(const AeModel& m, const Vec& x, double step) {
    Mat g = ae_gradient(m, {x});
    AeModel probe = m;
    double gmax = 0.0;
    for (double v : g.v) gmax = std::max(gmax, std::fabs(v));

    double max_rel = 0.0;
    for (std::size_t c = 0; c < g.v.size(); ++c) {
        double saved = probe.w.v[c];
        probe.w.v[c] = saved + step;
        double lp = ae_loss(probe, x).total;
        probe.w.v[c] = saved - step;
        double lm = ae_loss(probe, x).total;
        probe.w.v[c] = saved;
        double numeric = (lp - lm) / (2.0 * step);
        double denom = std::max({std::fabs(numeric), std::fabs(g.v[c]), 1e-8 * gmax, 1e-12});
        max_rel = std::max(max_rel, std::fabs(numeric - g.v[c]) / denom);
    }
    return max_rel;
}

SaeTrainResult train_ae(AeModel& m, const PatchDataset& dataset, const SaeTrainConfig& cfg,
                        const WhiteningTransform& whitening) {
    dataset.validate();
    if (dataset.patches.empty()) throw std::invalid_argument("train_ae: empty dataset");
    if (whitening.retained_dims != m.w.cols)
        throw std::invalid_argument("train_ae: whitening output does not match model dimension");
    if (whitening.input_dim() != dataset.dims().count())
        throw std::invalid_argument("train_ae: whitening input does not match flattened patch size");

    std::vector<Vec> data;
    data.reserve(dataset.patches.size());
    for (const auto& p : dataset.patches) data.push_back(whitening.apply(p.values));
    const std::size_t count = data.size();

    Mat vel(m.w.rows, m.w.cols);
    auto step = [&](const std::vector<std::size_t>& order, std::size_t start, std::size_t end) {
        std::vector<Vec> batch;
        batch.reserve(end - start);
        for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
        Mat g = ae_gradient(m, batch);
        for (std::size_t i = 0; i < vel.v.size(); ++i) {
            vel.v[i] = cfg.momentum * vel.v[i] - cfg.eta * g.v[i];
            m.w.v[i] += vel.v[i];
        }
    };
    auto epoch_loss = [&]() {
        LossParts acc;
        for (const Vec& x : data) {
            LossParts p = ae_loss(m, x);
            acc.recon += p.recon;
            acc.contraction += p.contraction;
        }
        double inv = 1.0 / static_cast<double>(count);
        acc.recon *= inv;
        acc.contraction *= inv;
        acc.total = acc.recon + m.lambda * acc.contraction;
        return acc;
    };

    return sgd_loop(count, cfg.epochs, cfg.batch, cfg.seed, epoch_loss, step);
}

} // namespace stsync
