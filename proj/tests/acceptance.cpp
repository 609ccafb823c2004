// Acceptance gate: one pass/fail line per criterion. Exit code 0 only if
// every criterion passes.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "stsync/classify.hpp"
#include "stsync/config.hpp"
#include "stsync/kernels.hpp"
#include "stsync/dataset.hpp"
#include "stsync/model_io.hpp"
#include "stsync/pgm.hpp"
#include "stsync/pipeline.hpp"
#include "stsync/rng.hpp"
#include "stsync/sae.hpp"
#include "stsync/skmeans.hpp"
#include "stsync/synchrony.hpp"
#include "stsync/vtb.hpp"

using namespace stsync;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vec random_vec(Rng& rng, std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

// double-double accumulator; products enter exactly via fma
struct DD {
    double hi = 0.0, lo = 0.0;

    void add(double x) {
        double t = hi + x;
        double e = std::fabs(hi) >= std::fabs(x) ? (hi - t) + x : (x - t) + hi;
        hi = t;
        lo += e;
    }
    void add_product(double a, double b) {
        double p = a * b;
        double err = std::fma(a, b, -p);
        add(p);
        lo += err;
    }
    double value() const { return hi + lo; }
};

std::int64_t ulp_distance(double a, double b) {
    if (a == b) return 0;
    auto ia = std::bit_cast<std::int64_t>(a);
    auto ib = std::bit_cast<std::int64_t>(b);
    if ((ia < 0) != (ib < 0)) return INT64_MAX;
    return std::abs(ia - ib);
}

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(static_cast<bool>(in), "cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- criterion 1: synchrony soundness ----

std::string criterion1() {
    auto t0 = Clock::now();
    Rng rng(1001);
    const std::size_t n = 16, trials = 100000;
    std::vector<std::size_t> perm(n);
    for (std::size_t t = 0; t < trials; ++t) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);
        WarpOperator p(perm);
        Vec w1 = random_vec(rng, n), x1 = random_vec(rng, n);
        FilterPair pair{w1, p.apply(w1)};
        Vec x2 = p.apply(x1);
        require(check_synchrony(pair, x1, x2) != SynchronyVerdict::Asynchronous,
                "warped pair reported asynchronous at trial " + std::to_string(t));
    }
    double dt = seconds_since(t0);
    require(dt < 10.0, "runtime " + std::to_string(dt) + " s exceeds 10 s");
    return "100000 warped triples, none asynchronous, " + std::to_string(dt) + " s";
}

// ---- criterion 2: product-unit response ordering on sinusoids ----

std::string criterion2() {
    auto t0 = Clock::now();
    const std::size_t n = 64;
    const double freq = 1.0 / 16.0;
    const long shift = 4;

    auto [x1, x2] = generate_sinusoid_pair(n, freq, 0.0, shift);
    Vec w1 = x1, w2 = x2; // filters tuned to the moving sinusoid

    // case 1: preferred stimulus (both frames match)
    double p1 = product_response({w1, w2}, x1, x2);

    // case 2: weak match plus an orthogonal sinusoid at twice the frequency
    auto [o1, o2] = generate_sinusoid_pair(n, 2.0 * freq, 0.0, shift);
    Vec m1(n), m2(n);
    for (std::size_t i = 0; i < n; ++i) {
        m1[i] = 0.03 * x1[i] + o1[i];
        m2[i] = 0.03 * x2[i] + o2[i];
    }
    double p2 = product_response({w1, w2}, m1, m2);

    // case 3: second frame a further quarter period away (quadrature)
    auto [q1, q2] = generate_sinusoid_pair(n, freq, 0.0, 2 * shift);
    double p3 = product_response({w1, w2}, q1, q2);

    require(p1 > 0.0, "case-1 response not positive");
    require(p1 / std::fabs(p2) >= 10.0,
            "case-1/case-2 ratio " + std::to_string(p1 / std::fabs(p2)) + " < 10");
    require(std::fabs(p3) <= 0.01 * p1, "case-3 response not near zero");
    double dt = seconds_since(t0);
    require(dt < 1.0, "runtime exceeds 1 s");
    std::ostringstream os;
    os << "p1=" << p1 << " p2=" << p2 << " p3=" << p3;
    return os.str();
}

// ---- criterion 3: binomial identity to <= 8 ulps ----

std::string criterion3() {
    Rng rng(1003);
    std::int64_t worst = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::size_t frames = 2 + rng.uniform_index(7);
        std::size_t n = 1 + rng.uniform_index(16);
        std::vector<Vec> ws, xs;
        for (std::size_t f = 0; f < frames; ++f) {
            ws.push_back(random_vec(rng, n));
            xs.push_back(random_vec(rng, n));
        }
        double energy = energy_response(ws, xs);

        // same per-frame responses, expanded via the binomial identity;
        // double-double keeps the oracle exact even when the frame responses
        // cancel
        Vec r(frames, 0.0);
        for (std::size_t f = 0; f < frames; ++f)
            r[f] = kernels::dot(ws[f].data(), xs[f].data(), n);
        DD rhs;
        for (std::size_t i = 0; i < frames; ++i) rhs.add_product(r[i], r[i]);
        for (std::size_t i = 0; i < frames; ++i)
            for (std::size_t j = i + 1; j < frames; ++j) rhs.add_product(2.0 * r[i], r[j]);

        std::int64_t d = ulp_distance(energy, rhs.value());
        worst = std::max(worst, d);
        require(d <= 8, "ulp distance " + std::to_string(d) + " > 8 at trial " +
                            std::to_string(trial));
    }
    return "10000 instances, worst ulp distance " + std::to_string(worst);
}

// ---- criterion 4: K-means update rule vs reconstruction gradient ----

std::string criterion4() {
    Rng rng(1004);
    const double eta = 0.01, step = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t q = 2 + rng.uniform_index(6), n = 4 + rng.uniform_index(12);
        auto m = SkMeansModel::init_pair(q, n, 2000 + static_cast<std::uint64_t>(trial));
        Vec x = random_vec(rng, n), y = random_vec(rng, n);
        std::size_t s = assign_pair(m, x, y);

        SkMeansModel before = m;
        update_pair(m, x, y, eta);

        // The rule is -(eta/2) d loss_pair_x / d Wx_s with the other bank's
        // response held fixed. Any constant prefactor is absorbed into eta,
        // so collinearity is what is checked.
        double err = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double saved = before.wx(s, i);
            before.wx(s, i) = saved + step;
            double lp = loss_pair_x(before, s, x, y);
            before.wx(s, i) = saved - step;
            double lm = loss_pair_x(before, s, x, y);
            before.wx(s, i) = saved;
            double g = (lp - lm) / (2.0 * step);
            double delta = m.wx(s, i) - saved;
            err += std::pow(delta - (-eta / 2.0) * g, 2);
            norm += delta * delta;
        }
        double rel = std::sqrt(err) / std::max(std::sqrt(norm), 1e-12);
        worst = std::max(worst, rel);
        require(rel < 1e-5, "relative error " + std::to_string(rel) + " at trial " +
                                std::to_string(trial));
    }
    std::ostringstream os;
    os << "1000 instances, worst relative error " << worst;
    return os.str();
}

// ---- criterion 5: SAE analytic gradients vs finite differences ----

std::string criterion5() {
    auto t0 = Clock::now();
    Rng rng(1005);
    double worst = 0.0;
    for (double lambda : {0.0, 0.5, 2.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            const std::size_t q = 2 + rng.uniform_index(15), n = 4 + rng.uniform_index(61);
            auto seed = 3000 + static_cast<std::uint64_t>(trial);
            // unit-norm filter rows against inputs scaled like whitened data
            // keep the responses O(1), as in training
            const double scale = 1.0 / std::sqrt(static_cast<double>(n));
            auto sample_vec = [&] {
                Vec v = random_vec(rng, n);
                for (auto& x : v) x *= scale;
                return v;
            };
            {
                auto m = SaeModel::init_pair(q, n, seed, lambda);
                SaeSample s{sample_vec(), sample_vec()};
                worst = std::max(worst, finite_diff_check(m, s, 1e-5));
            }
            {
                auto m = SaeModel::init_pair(q, n, seed + 1, lambda, true);
                SaeSample s{sample_vec(), sample_vec()};
                worst = std::max(worst, finite_diff_check(m, s, 1e-5));
            }
            {
                auto m = SaeModel::init_sequence(q, n, seed + 2, lambda);
                SaeSample s{sample_vec(), {}};
                worst = std::max(worst, finite_diff_check(m, s, 1e-5));
            }
        }
    }
    double dt = seconds_since(t0);
    require(worst < 1e-4, "max relative discrepancy " + std::to_string(worst));
    require(dt < 60.0, "runtime " + std::to_string(dt) + " s exceeds 60 s");
    std::ostringstream os;
    os << "pair/tied/sequence, lambda {0, 0.5, 2}, worst " << worst << ", " << dt << " s";
    return os.str();
}

// ---- criterion 6: contraction closed form vs numeric Jacobian ----

std::string criterion6() {
    Rng rng(1006);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t q = 2 + rng.uniform_index(7), n = 3 + rng.uniform_index(8);
        const double step = 1e-5;
        bool pair = trial % 2 == 0;
        auto m = pair ? SaeModel::init_pair(q, n, 4000 + static_cast<std::uint64_t>(trial))
                      : SaeModel::init_sequence(q, n, 4000 + static_cast<std::uint64_t>(trial));
        Vec x = random_vec(rng, n), y = random_vec(rng, n);

        auto encode = [&](const Vec& xs, const Vec& ys) {
            return pair ? encode_pair(m, xs, ys).h : encode_seq(m, xs).h;
        };
        double fd = 0.0;
        auto columns = [&](Vec input, bool is_x) {
            for (std::size_t i = 0; i < input.size(); ++i) {
                Vec p = input, mi = input;
                p[i] += step;
                mi[i] -= step;
                Vec hp = is_x ? encode(p, y) : encode(x, p);
                Vec hm = is_x ? encode(mi, y) : encode(x, mi);
                for (std::size_t k = 0; k < hp.size(); ++k)
                    fd += std::pow((hp[k] - hm[k]) / (2.0 * step), 2);
            }
        };
        columns(x, true);
        if (pair) columns(y, false);

        double closed = contraction_penalty(m, pair ? encode_pair(m, x, y) : encode_seq(m, x));
        double rel = std::fabs(closed - fd) / std::max({closed, fd, 1e-12});
        worst = std::max(worst, rel);
        require(rel < 1e-4, "relative error " + std::to_string(rel) + " at trial " +
                                std::to_string(trial));
    }
    std::ostringstream os;
    os << "100 instances, worst relative error " << worst;
    return os.str();
}

// ---- criterion 7: pipeline geometry ----

std::string criterion7() {
    DescriptorConfig cfg;
    require(cfg.super_dims == Dims3{14, 20, 20}, "default super block is not 14x20x20");
    require(cfg.sub_dims == Dims3{10, 16, 16}, "default sub block is not 10x16x16");
    require(cfg.sub_blocks_per_super() == 8, "sub blocks per super != 8");
    require(cfg.super_strides() == Dims3{7, 10, 10}, "dense strides != (7,10,10)");
    return "8 sub-blocks per super block, dense strides (7,10,10)";
}

// ---- criteria 8-10: desk-scale classification, throughput, determinism ----

struct DeskScaleRun {
    double acc_skmeans = 0, acc_sae = 0, acc_kmeans = 0, acc_ae = 0;
    fs::path dir;
};

// [frozen after recorded seeded runs; tolerance +/- 2 points]
constexpr double kExpectedSkMeans = 1.0;
constexpr double kExpectedSae = 0.9975;
constexpr double kExpectedKMeans = 0.84;
constexpr double kExpectedAe = 0.5125;

Histogram clip_histogram(const VideoBlock& clip, const Encoder& enc,
                         const WhiteningTransform& wt, const Codebook& vocab,
                         const PcaProjection& pca, const DescriptorConfig& dc) {
    return video_histogram(clip, enc, wt, vocab, pca, dc);
}

double eval_model(const std::string& name, const Encoder& enc, const WhiteningTransform& wt,
                  const PatchDataset& train, const PatchDataset& test,
                  const DescriptorConfig& dc, std::uint64_t seed, const fs::path& dir) {
    std::vector<Vec> pre;
    pre.reserve(train.patches.size());
    for (const auto& clip : train.patches)
        pre.push_back(extract_pre_descriptor(enc, wt, dense_superblocks(clip, dc)[0], dc));
    Mat m(pre.size(), pre.front().size());
    for (std::size_t i = 0; i < pre.size(); ++i) std::copy(pre[i].begin(), pre[i].end(), m.row(i));
    auto pca = fit_pca(m, dc.descriptor_pca_dims);

    std::vector<Vec> projected;
    projected.reserve(pre.size());
    for (const auto& p : pre) projected.push_back(pca.project(p));
    auto vocab = build_vocabulary(projected, dc.vocab_size, seed, 20);

    std::vector<LabeledHistogram> train_h(train.patches.size()), test_h(test.patches.size());
    for (std::size_t i = 0; i < train.patches.size(); ++i)
        train_h[i] = {clip_histogram(train.patches[i], enc, wt, vocab, pca, dc),
                      (*train.labels)[i]};
    for (std::size_t i = 0; i < test.patches.size(); ++i)
        test_h[i] = {clip_histogram(test.patches[i], enc, wt, vocab, pca, dc),
                     (*test.labels)[i]};

    auto rep = evaluate_split(train_h, test_h, 5);

    std::ofstream out(dir / (name + "_report.csv"));
    out << "video_id,true_label,predicted_label\n";
    for (std::size_t i = 0; i < test_h.size(); ++i)
        out << i << "," << test_h[i].label << "," << rep.predicted[i] << "\n";
    return rep.accuracy;
}

DeskScaleRun desk_scale_run(const fs::path& dir) {
    fs::create_directories(dir);
    const std::uint64_t seed = 42;

    auto train_sources = make_smooth_images(16, 64, 64, 101);
    auto test_sources = make_smooth_images(16, 64, 64, 201);
    auto train = generate_translating_patches(train_sources, 2000, {10, 16, 16}, 1, 102,
                                              ShiftSet::Cardinal);
    auto test = generate_translating_patches(test_sources, 400, {10, 16, 16}, 1, 202,
                                             ShiftSet::Cardinal);

    WhiteningOptions wopt;
    auto wt = fit_dataset_whitening(train, ModelMode::Sequence, wopt, 0, seed);
    const std::size_t q = 64, n = wt.retained_dims;

    DescriptorConfig dc;
    dc.super_dims = {10, 16, 16}; // one super block per clip
    dc.sub_dims = {10, 16, 16};
    dc.descriptor_pca_dims = 40;
    dc.vocab_size = 200;

    DeskScaleRun run;
    run.dir = dir;

    // one shared training budget across all four models
    TrainConfig tc;
    tc.seed = seed;
    tc.epochs = 50;
    SaeTrainConfig sc;
    sc.seed = seed;
    sc.eta = 0.01;
    sc.epochs = 50;
    const double lambda = 2.0;

    {
        auto model = SkMeansModel::init_sequence(q, n, seed);
        model.frame_dims = Dims3{10, 16, 16};
        train_skmeans(model, train, tc, wt);
        ModelBundle b;
        b.kind = ModelKind::SkMeans;
        b.skmeans = model;
        b.whitening = wt;
        save_model_bundle(dir / "skmeans", b);
        Encoder enc = [&model](const Vec& z) { return infer_seq(model, z); };
        run.acc_skmeans = eval_model("skmeans", enc, wt, train, test, dc, seed, dir);
    }
    {
        auto model = SaeModel::init_sequence(q, n, seed, lambda);
        model.frame_dims = Dims3{10, 16, 16};
        auto res = train_sae(model, train, sc, wt);
        require(!res.diverged, "SAE training diverged");
        ModelBundle b;
        b.kind = ModelKind::Sae;
        b.sae = model;
        b.whitening = wt;
        save_model_bundle(dir / "sae", b);
        Encoder enc = [&model](const Vec& z) { return encode_seq(model, z).h; };
        run.acc_sae = eval_model("sae", enc, wt, train, test, dc, seed, dir);
    }
    {
        Mat centroids = init_centroids(q, n, seed);
        train_standard_kmeans(centroids, train, tc, wt);
        ModelBundle b;
        b.kind = ModelKind::KMeans;
        b.centroids = centroids;
        b.whitening = wt;
        save_model_bundle(dir / "kmeans", b);
        Encoder enc = [&centroids](const Vec& z) { return standard_kmeans_infer(centroids, z); };
        run.acc_kmeans = eval_model("kmeans", enc, wt, train, test, dc, seed, dir);
    }
    {
        auto model = AeModel::init(q, n, seed, lambda);
        auto res = train_ae(model, train, sc, wt);
        require(!res.diverged, "AE training diverged");
        ModelBundle b;
        b.kind = ModelKind::Ae;
        b.ae = model;
        b.whitening = wt;
        save_model_bundle(dir / "ae", b);
        Encoder enc = [&model](const Vec& z) { return ae_encode(model, z); };
        run.acc_ae = eval_model("ae", enc, wt, train, test, dc, seed, dir);
    }
    return run;
}

DeskScaleRun g_run8a, g_run8b; // criterion 10 compares a second pass

std::string criterion8() {
    auto t0 = Clock::now();
    g_run8a = desk_scale_run(fs::temp_directory_path() / "stsync_accept8_a");
    double dt = seconds_since(t0);

    std::ostringstream os;
    os << "skmeans " << g_run8a.acc_skmeans << ", sae " << g_run8a.acc_sae << ", kmeans "
       << g_run8a.acc_kmeans << ", ae " << g_run8a.acc_ae << ", " << dt << " s";
    std::string detail = os.str();

    require(g_run8a.acc_skmeans >= 0.90, "SK-means accuracy below 0.90: " + detail);
    require(g_run8a.acc_sae >= 0.90, "SAE accuracy below 0.90: " + detail);
    require(g_run8a.acc_skmeans - g_run8a.acc_kmeans >= 0.10 &&
                g_run8a.acc_skmeans - g_run8a.acc_ae >= 0.10,
            "SK-means margin over baselines below 10 points: " + detail);
    require(g_run8a.acc_sae - g_run8a.acc_kmeans >= 0.10 &&
                g_run8a.acc_sae - g_run8a.acc_ae >= 0.10,
            "SAE margin over baselines below 10 points: " + detail);
    require(dt < 900.0, "runtime exceeds 15 min: " + detail);

    auto within = [](double got, double expect) { return std::fabs(got - expect) <= 0.02; };
    require(within(g_run8a.acc_skmeans, kExpectedSkMeans) && within(g_run8a.acc_sae, kExpectedSae) &&
                within(g_run8a.acc_kmeans, kExpectedKMeans) && within(g_run8a.acc_ae, kExpectedAe),
            "accuracies drifted from the recorded fixtures: " + detail);
    return detail;
}

fs::path throughput_model_path(const fs::path& dir) { return dir / "w.vtb"; }

double throughput_run(const fs::path& dir) {
    auto sources = make_smooth_images(16, 64, 64, 301);
    auto ds = generate_translating_patches(sources, 50000, {10, 16, 16}, 1, 302);

    auto t0 = Clock::now();
    WhiteningOptions wopt;
    auto wt = fit_dataset_whitening(ds, ModelMode::Sequence, wopt, 20000, 42);
    auto model = SkMeansModel::init_sequence(300, wt.retained_dims, 42);
    TrainConfig tc;
    tc.epochs = 1;
    tc.seed = 42;
    train_skmeans(model, ds, tc, wt);
    double dt = seconds_since(t0);

    ModelBundle b;
    b.kind = ModelKind::SkMeans;
    b.skmeans = model;
    b.skmeans.frame_dims = Dims3{10, 16, 16};
    b.whitening = wt;
    save_model_bundle(dir, b);
    return dt;
}

std::string criterion9() {
    auto dir = fs::temp_directory_path() / "stsync_accept9_a";
    fs::create_directories(dir);
    double dt = throughput_run(dir);
    require(dt < 600.0,
            "whitening + 1 epoch took " + std::to_string(dt) + " s (budget 600 s)");
    return "q=300 on 50000 whitened 10x16x16 patches, 1 epoch in " + std::to_string(dt) + " s";
}

std::string criterion10() {
    // second full pass of criteria 8 and 9 with identical seeds
    g_run8b = desk_scale_run(fs::temp_directory_path() / "stsync_accept8_b");
    auto dir9b = fs::temp_directory_path() / "stsync_accept9_b";
    fs::create_directories(dir9b);
    throughput_run(dir9b);

    const char* model_files[] = {"skmeans/w.vtb", "sae/w.vtb", "kmeans/w.vtb", "ae/w.vtb",
                                 "skmeans/whitening_forward.vtb"};
    for (const char* f : model_files)
        require(slurp(g_run8a.dir / f) == slurp(g_run8b.dir / f),
                std::string("model file differs between runs: ") + f);
    const char* reports[] = {"skmeans_report.csv", "sae_report.csv", "kmeans_report.csv",
                             "ae_report.csv"};
    for (const char* f : reports)
        require(slurp(g_run8a.dir / f) == slurp(g_run8b.dir / f),
                std::string("accuracy report differs between runs: ") + f);
    require(slurp(throughput_model_path(fs::temp_directory_path() / "stsync_accept9_a")) ==
                slurp(throughput_model_path(dir9b)),
            "throughput-run model differs between runs");
    return "model files and reports bit-identical across repeated seeded runs";
}

// ---- criterion 11: format round-trips and mosaic fixture ----

// [frozen from a recorded run on this platform]
constexpr std::uint64_t kMosaicHash = 553326507709988784ull;

std::string criterion11() {
    auto tmp = fs::temp_directory_path();

    // VTB round-trips, all dtypes
    Rng rng(1011);
    std::vector<double> d64(24);
    for (auto& v : d64) v = rng.normal();
    vtb::write(tmp / "acc_f64.vtb", vtb::Tensor::from_f64({2, 3, 4}, d64));
    require(vtb::read(tmp / "acc_f64.vtb").as_f64() == d64, "f64 round-trip mismatch");

    std::vector<float> d32 = {1.5f, -0.25f, 3e7f, -2e-8f};
    vtb::write(tmp / "acc_f32.vtb", vtb::Tensor::from_f32({4}, d32));
    require(vtb::read(tmp / "acc_f32.vtb").as_f32() == d32, "f32 round-trip mismatch");

    std::vector<std::uint8_t> du8 = {0, 7, 255};
    vtb::write(tmp / "acc_u8.vtb", vtb::Tensor::from_u8({3}, du8));
    require(vtb::read(tmp / "acc_u8.vtb").as_u8() == du8, "u8 round-trip mismatch");

    // config parse -> serialize -> parse identity
    RunConfig a = RunConfig::from_text("model.q = 12\nsae.lambda = 0.125\n", "accept");
    RunConfig b = RunConfig::from_text(a.serialize(), "accept2");
    require(a.serialize() == b.serialize(), "config round-trip not identity");

    // PGM mosaic of a seeded model is byte-stable
    auto model = SkMeansModel::init_sequence(8, 2 * 3 * 3, 1100);
    GrayImage img = filter_mosaic(model.w, {2, 3, 3});
    write_pgm(tmp / "acc_mosaic.pgm", img);
    auto bytes = slurp(tmp / "acc_mosaic.pgm");
    std::uint64_t h = fnv1a(bytes.data(), bytes.size());
    require(h == kMosaicHash,
            "mosaic fixture hash mismatch: got " + std::to_string(h));
    return "VTB/config round-trips exact, mosaic hash " + std::to_string(h);
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<std::string()> run;
    };
    const Criterion criteria[] = {
        {1, "synchrony soundness", criterion1},
        {2, "product-unit response ordering", criterion2},
        {3, "binomial identity (<= 8 ulps)", criterion3},
        {4, "k-means rule vs gradient", criterion4},
        {5, "autoencoder gradient check", criterion5},
        {6, "contraction closed form", criterion6},
        {7, "pipeline geometry", criterion7},
        {8, "desk-scale motion classification", criterion8},
        {9, "training throughput", criterion9},
        {10, "determinism", criterion10},
        {11, "format round-trips", criterion11},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        try {
            std::string detail = c.run();
            std::cout << "criterion " << c.id << " (" << c.name << "): PASS — " << detail << "\n";
        } catch (const std::exception& e) {
            std::cout << "criterion " << c.id << " (" << c.name << "): FAIL — " << e.what()
                      << "\n";
            ++failures;
        }
        std::cout.flush();
    }
    if (failures > 0) {
        std::cout << failures << " criteria failed\n";
        return 1;
    }
    std::cout << "all 11 criteria passed\n";
    return 0;
}
