// stsync command-line tool: data generation, model training, descriptor
// extraction, evaluation, and filter visualization.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stsync/config.hpp"
#include "stsync/dataset.hpp"
#include "stsync/kernels.hpp"
#include "stsync/model_io.hpp"
#include "stsync/pgm.hpp"
#include "stsync/pipeline.hpp"
#include "stsync/rng.hpp"
#include "stsync/sae.hpp"
#include "stsync/skmeans.hpp"
#include "stsync/vtb.hpp"

namespace fs = std::filesystem;
using namespace stsync;

namespace {

struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value config file");
    cmd->add_option("--set", args.overrides, "inline override, KEY=VALUE (repeatable)");
}

RunConfig load_config(const ConfigArgs& args) {
    RunConfig cfg = args.config_path.empty() ? RunConfig() : RunConfig::from_file(args.config_path);
    for (const auto& kv : args.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--set expects KEY=VALUE, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

DescriptorConfig descriptor_config(const RunConfig& cfg) {
    DescriptorConfig d;
    d.super_dims = {cfg.get_u64("pipeline.super_frames"), cfg.get_u64("pipeline.super_height"),
                    cfg.get_u64("pipeline.super_width")};
    d.sub_dims = {cfg.get_u64("pipeline.sub_frames"), cfg.get_u64("pipeline.sub_height"),
                  cfg.get_u64("pipeline.sub_width")};
    d.sub_stride = cfg.get_u64("pipeline.sub_stride");
    d.overlap_fraction = cfg.get_double("pipeline.overlap");
    d.descriptor_pca_dims = cfg.get_u64("pipeline.descriptor_pca_dims");
    d.vocab_size = cfg.get_u64("pipeline.vocab_size");
    d.pooling_centroids = cfg.get_u64("pipeline.pooling_centroids");
    return d;
}

WhiteningOptions whitening_options(const RunConfig& cfg) {
    WhiteningOptions opt;
    opt.retained_dims = cfg.get_u64("whitening.retained_dims");
    opt.variance_fraction = cfg.get_double("whitening.variance_fraction");
    opt.eigenvalue_floor_rel = cfg.get_double("whitening.eigenvalue_floor_rel");
    return opt;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// ---- gen-data ----

int cmd_gen_data(const std::string& kind_arg, const std::string& out, const ConfigArgs& cargs) {
    RunConfig cfg = load_config(cargs);
    std::string kind = kind_arg.empty() ? cfg.get("data.kind") : kind_arg;
    std::uint64_t seed = cfg.get_u64("seed");

    PatchDataset ds;
    if (kind == "translations") {
        auto sources = make_smooth_images(cfg.get_u64("data.source_count"),
                                          cfg.get_u64("data.source_size"),
                                          cfg.get_u64("data.source_size"), seed,
                                          static_cast<int>(cfg.get_int("data.source_blur")));
        Dims3 dims{cfg.get_u64("data.frames"), cfg.get_u64("data.height"),
                   cfg.get_u64("data.width")};
        std::string ss = cfg.get("data.shift_set");
        if (ss != "grid" && ss != "cardinal")
            throw std::runtime_error("data.shift_set must be grid or cardinal, got '" + ss + "'");
        ds = generate_translating_patches(sources, cfg.get_u64("data.count"), dims,
                                          static_cast<int>(cfg.get_int("data.max_shift")), seed,
                                          ss == "grid" ? ShiftSet::FullGrid : ShiftSet::Cardinal);
    } else if (kind == "sinusoids") {
        std::size_t n = cfg.get_u64("sinusoid.n");
        double freq = cfg.get_double("sinusoid.freq");
        double base_phase = cfg.get_double("sinusoid.phase");
        long shift = static_cast<long>(cfg.get_int("sinusoid.shift"));
        std::size_t count = cfg.get_u64("data.count");
        Rng rng(seed);
        ds.seed = seed;
        ds.labels = std::vector<std::int64_t>(count, shift);
        for (std::size_t i = 0; i < count; ++i) {
            double phase = base_phase + (i == 0 ? 0.0 : rng.uniform() * 2.0 * std::numbers::pi);
            auto [x1, x2] = generate_sinusoid_pair(n, freq, phase, shift);
            VideoBlock b({2, 1, n});
            std::copy(x1.begin(), x1.end(), b.values.begin());
            std::copy(x2.begin(), x2.end(), b.values.begin() + static_cast<long>(n));
            ds.patches.push_back(std::move(b));
        }
    } else {
        throw std::runtime_error("unknown data kind '" + kind + "' (translations | sinusoids)");
    }

    save_dataset(out, ds);
    std::cout << "wrote " << ds.patches.size() << " patches of "
              << ds.dims().t << "x" << ds.dims().h << "x" << ds.dims().w << " to " << out << "\n";
    return 0;
}

// ---- train ----

std::string trace_csv(const Vec& loss) {
    std::string s = "epoch,loss\n";
    for (std::size_t i = 0; i < loss.size(); ++i)
        s += std::to_string(i) + "," + std::to_string(loss[i]) + "\n";
    return s;
}

std::string trace_csv(const std::vector<LossParts>& trace) {
    std::string s = "epoch,recon,contraction,total\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        s += std::to_string(i) + "," + std::to_string(trace[i].recon) + "," +
             std::to_string(trace[i].contraction) + "," + std::to_string(trace[i].total) + "\n";
    return s;
}

int cmd_train(const std::string& model_name, const std::string& data, const std::string& out,
              const ConfigArgs& cargs) {
    RunConfig cfg = load_config(cargs);
    PatchDataset ds = load_dataset(data);
    Dims3 dims = ds.dims();

    std::string mode_s = cfg.get("model.mode");
    if (mode_s != "pair" && mode_s != "sequence")
        throw std::runtime_error("model.mode must be pair or sequence, got '" + mode_s + "'");
    ModelMode mode = mode_s == "pair" ? ModelMode::Pair : ModelMode::Sequence;
    // the baselines have no pair variant; they always consume whole blocks
    if (model_name == "kmeans" || model_name == "ae-baseline") mode = ModelMode::Sequence;

    std::uint64_t seed = cfg.get_u64("seed");
    std::size_t q = cfg.get_u64("model.q");

    WhiteningTransform wt = fit_dataset_whitening(ds, mode, whitening_options(cfg),
                                                  cfg.get_u64("whitening.sample"), seed);
    const std::size_t n = wt.retained_dims;
    std::optional<Dims3> frame_dims =
        mode == ModelMode::Sequence ? dims : Dims3{1, dims.h, dims.w};

    TrainConfig tc;
    tc.eta = cfg.get_double("train.eta");
    tc.epochs = cfg.get_u64("train.epochs");
    tc.seed = seed;
    tc.normalize_every = cfg.get_u64("train.normalize_every");
    tc.eta_decay = cfg.get_double("train.eta_decay");

    SaeTrainConfig sc;
    sc.eta = cfg.get_double("sae.eta");
    sc.epochs = cfg.get_u64("sae.epochs");
    sc.batch = cfg.get_u64("sae.batch");
    sc.momentum = cfg.get_double("sae.momentum");
    sc.seed = seed;

    ModelBundle bundle;
    bundle.whitening = wt;
    std::string trace;

    if (model_name == "skmeans") {
        bundle.kind = ModelKind::SkMeans;
        bundle.skmeans = mode == ModelMode::Pair ? SkMeansModel::init_pair(q, n, seed)
                                                 : SkMeansModel::init_sequence(q, n, seed);
        bundle.skmeans.frame_dims = frame_dims;
        trace = trace_csv(train_skmeans(bundle.skmeans, ds, tc, wt));
    } else if (model_name == "kmeans") {
        bundle.kind = ModelKind::KMeans;
        bundle.centroids = init_centroids(q, n, seed);
        trace = trace_csv(train_standard_kmeans(bundle.centroids, ds, tc, wt));
    } else if (model_name == "sae") {
        bundle.kind = ModelKind::Sae;
        double lambda = cfg.get_double("sae.lambda");
        bundle.sae = mode == ModelMode::Pair
                         ? SaeModel::init_pair(q, n, seed, lambda, cfg.get_bool("sae.tied"))
                         : SaeModel::init_sequence(q, n, seed, lambda);
        bundle.sae.frame_dims = frame_dims;
        SaeTrainResult res = train_sae(bundle.sae, ds, sc, wt);
        trace = trace_csv(res.trace);
        if (res.diverged) {
            fs::create_directories(out);
            write_text(fs::path(out) / "trace.csv", trace);
            throw std::runtime_error("training diverged (loss went non-finite); trace written");
        }
    } else if (model_name == "ae-baseline") {
        bundle.kind = ModelKind::Ae;
        bundle.ae = AeModel::init(q, n, seed, cfg.get_double("sae.lambda"));
        SaeTrainResult res = train_ae(bundle.ae, ds, sc, wt);
        trace = trace_csv(res.trace);
        if (res.diverged) {
            fs::create_directories(out);
            write_text(fs::path(out) / "trace.csv", trace);
            throw std::runtime_error("training diverged (loss went non-finite); trace written");
        }
    } else {
        throw std::runtime_error("unknown model '" + model_name +
                                 "' (skmeans | sae | kmeans | ae-baseline)");
    }

    save_model_bundle(out, bundle);
    write_text(fs::path(out) / "trace.csv", trace);
    std::cout << "trained " << model_name << " (q=" << q << ", n=" << n << ") -> " << out << "\n";
    return 0;
}

// ---- extract ----

void save_histograms(const fs::path& dir, const std::vector<Histogram>& hists,
                     const std::optional<std::vector<std::int64_t>>& labels) {
    fs::create_directories(dir);
    if (hists.empty()) throw std::runtime_error("no histograms to save");
    Mat m(hists.size(), hists.front().weights.size());
    for (std::size_t i = 0; i < hists.size(); ++i)
        std::copy(hists[i].weights.begin(), hists[i].weights.end(), m.row(i));
    vtb::write(dir / "histograms.vtb", vtb::Tensor::from_f64({m.rows, m.cols}, m.v));
    if (labels) {
        std::vector<double> lab(labels->begin(), labels->end());
        vtb::write(dir / "labels.vtb", vtb::Tensor::from_f64({lab.size()}, lab));
    }
    write_kv_file(dir / "manifest.txt",
                  {{"format", "stsync-histograms"},
                   {"count", std::to_string(hists.size())},
                   {"bins", std::to_string(hists.front().weights.size())},
                   {"labeled", labels ? "true" : "false"}});
}

std::vector<LabeledHistogram> load_histograms(const fs::path& dir) {
    auto kv = read_kv_file(dir / "manifest.txt");
    if (kv.at("format") != "stsync-histograms")
        throw std::runtime_error(dir.string() + ": not a histogram directory");
    vtb::Tensor t = vtb::read(dir / "histograms.vtb");
    if (t.dims.size() != 2) throw std::runtime_error(dir.string() + ": bad histogram tensor");
    Vec all = t.as_f64();
    std::size_t count = t.dims[0], bins = t.dims[1];

    std::vector<std::int64_t> labels(count, 0);
    if (kv.at("labeled") == "true") {
        Vec lab = vtb::read(dir / "labels.vtb").as_f64();
        if (lab.size() != count) throw std::runtime_error(dir.string() + ": label count mismatch");
        for (std::size_t i = 0; i < count; ++i) labels[i] = static_cast<std::int64_t>(lab[i]);
    }

    std::vector<LabeledHistogram> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i].hist.weights.assign(all.begin() + static_cast<long>(i * bins),
                                   all.begin() + static_cast<long>((i + 1) * bins));
        out[i].label = labels[i];
    }
    return out;
}

int cmd_extract(const std::string& model_dir, const std::string& videos, const std::string& out,
                const std::string& features_dir, bool dump_descriptors, const ConfigArgs& cargs) {
    RunConfig cfg = load_config(cargs);
    ModelBundle bundle = load_model_bundle(model_dir);
    Encoder enc = bundle.encoder();
    PatchDataset vids = load_dataset(videos);
    if (vids.patches.empty()) throw std::runtime_error("extract: empty video dataset");
    DescriptorConfig dc = descriptor_config(cfg);
    std::uint64_t seed = cfg.get_u64("seed");

    FeatureSpace fspace;
    if (!features_dir.empty()) {
        fspace = load_feature_space(features_dir);
    } else {
        // fit descriptor PCA and the word vocabulary on these videos
        std::vector<Vec> pre;
        for (const auto& v : vids.patches)
            for (const auto& sb : dense_superblocks(v, dc))
                pre.push_back(extract_pre_descriptor(enc, bundle.whitening, sb, dc));
        std::size_t cap = cfg.get_u64("pipeline.vocab_samples");
        if (cap > 0 && pre.size() > cap) {
            Rng rng(seed);
            rng.shuffle(pre);
            pre.resize(cap);
        }
        Mat m(pre.size(), pre.front().size());
        for (std::size_t i = 0; i < pre.size(); ++i)
            std::copy(pre[i].begin(), pre[i].end(), m.row(i));
        fspace.descriptor_pca = fit_pca(m, dc.descriptor_pca_dims);

        std::vector<Vec> projected;
        projected.reserve(pre.size());
        for (const auto& p : pre) projected.push_back(fspace.descriptor_pca.project(p));
        fspace.vocabulary = build_vocabulary(projected, dc.vocab_size, seed,
                                             cfg.get_u64("pipeline.vocab_iterations"));
        save_feature_space(fs::path(out) / "features", fspace);
    }

    std::vector<Histogram> hists;
    hists.reserve(vids.patches.size());
    std::vector<Vec> descriptors;
    for (const auto& v : vids.patches) {
        hists.push_back(video_histogram(v, enc, bundle.whitening, fspace.vocabulary,
                                        fspace.descriptor_pca, dc));
        if (dump_descriptors)
            for (const auto& sb : dense_superblocks(v, dc))
                descriptors.push_back(
                    extract_descriptor(enc, bundle.whitening, sb, dc, fspace.descriptor_pca));
    }
    save_histograms(out, hists, vids.labels);

    if (dump_descriptors) {
        Mat m(descriptors.size(), descriptors.front().size());
        for (std::size_t i = 0; i < descriptors.size(); ++i)
            std::copy(descriptors[i].begin(), descriptors[i].end(), m.row(i));
        vtb::write(fs::path(out) / "descriptors.vtb",
                   vtb::Tensor::from_f64({m.rows, m.cols}, m.v));
    }

    if (cfg.get_bool("pipeline.pooling")) {
        // pooling layer: k-means over sub-block hidden vectors
        std::vector<Vec> hidden;
        for (const auto& v : vids.patches)
            for (const auto& sub :
                 crop_blocks(v, dc.sub_dims, {dc.sub_stride, dc.sub_stride, dc.sub_stride}))
                hidden.push_back(enc(bundle.whitening.apply(sub.values)));
        PoolingResult pool = pool_features(hidden, dc.pooling_centroids, seed,
                                           cfg.get_u64("pipeline.vocab_iterations"));
        fs::path pdir = fs::path(out) / "pooling";
        fs::create_directories(pdir);
        vtb::write(pdir / "centroids.vtb",
                   vtb::Tensor::from_f64({pool.codebook.centroids.rows,
                                          pool.codebook.centroids.cols},
                                         pool.codebook.centroids.v));
        std::size_t top = pool.top_filters.front().size();
        std::vector<double> flat;
        for (const auto& row : pool.top_filters)
            for (std::size_t qi : row) flat.push_back(static_cast<double>(qi));
        vtb::write(pdir / "top_filters.vtb",
                   vtb::Tensor::from_f64({pool.top_filters.size(), top}, flat));
        write_kv_file(pdir / "manifest.txt", {{"format", "stsync-pooling"}});
    }

    std::cout << "wrote " << hists.size() << " histograms ("
              << hists.front().weights.size() << " bins) to " << out << "\n";
    return 0;
}

// ---- eval ----

std::string confusion_csv(const EvalReport& rep) {
    std::string s = "true\\predicted";
    for (auto l : rep.class_labels) s += "," + std::to_string(l);
    s += "\n";
    for (std::size_t r = 0; r < rep.class_labels.size(); ++r) {
        s += std::to_string(rep.class_labels[r]);
        for (std::size_t c = 0; c < rep.class_labels.size(); ++c)
            s += "," + std::to_string(static_cast<long long>(rep.confusion(r, c)));
        s += "\n";
    }
    return s;
}

int cmd_eval(const std::string& train_dir, const std::string& test_dir, bool loo_flag,
             const std::string& out, const ConfigArgs& cargs) {
    RunConfig cfg = load_config(cargs);
    bool loo = loo_flag || cfg.get_bool("eval.loo");
    if (!loo && test_dir.empty())
        throw std::runtime_error("eval: need --test PATH or --loo");

    auto train = load_histograms(train_dir);
    std::size_t k = cfg.get_u64("knn.k");

    EvalReport rep;
    std::vector<LabeledHistogram> test;
    if (loo) {
        rep = evaluate_loo(train, k);
        test = train;
    } else {
        test = load_histograms(test_dir);
        rep = evaluate_split(train, test, k);
    }

    fs::create_directories(out);
    std::string report = "video_id,true_label,predicted_label\n";
    for (std::size_t i = 0; i < test.size(); ++i)
        report += std::to_string(i) + "," + std::to_string(test[i].label) + "," +
                  std::to_string(rep.predicted[i]) + "\n";
    write_text(fs::path(out) / "report.csv", report);
    write_text(fs::path(out) / "confusion.csv", confusion_csv(rep));

    // chi^2 kernel over the training histograms
    double gamma = cfg.get_double("chi2.gamma");
    std::vector<Histogram> train_h;
    for (const auto& it : train) train_h.push_back(it.hist);
    if (gamma <= 0.0) gamma = mean_pairwise_chi2(train_h);
    Mat kmat = chi2_kernel_matrix(train_h, gamma);
    vtb::write(fs::path(out) / "kernel.vtb", vtb::Tensor::from_f64({kmat.rows, kmat.cols}, kmat.v));

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", rep.accuracy);
    std::cout << "accuracy " << buf << " (" << test.size() << " videos, k=" << k
              << ", gamma=" << gamma << ")\n";
    return 0;
}

// ---- viz-filters ----

int cmd_viz(const std::string& model_dir, const std::string& out, const std::string& pooling_dir) {
    ModelBundle bundle = load_model_bundle(model_dir);
    Mat filters = bundle.pixel_filters();

    Dims3 fd{1, 1, filters.cols};
    if (bundle.kind == ModelKind::SkMeans && bundle.skmeans.frame_dims)
        fd = *bundle.skmeans.frame_dims;
    else if (bundle.kind == ModelKind::Sae && bundle.sae.frame_dims)
        fd = *bundle.sae.frame_dims;
    if (fd.count() != filters.cols)
        fd = {1, 1, filters.cols}; // unknown geometry: one flat tile per filter

    if (pooling_dir.empty()) {
        write_pgm(out, filter_mosaic(filters, fd));
    } else {
        vtb::Tensor t = vtb::read(fs::path(pooling_dir) / "top_filters.vtb");
        if (t.dims.size() != 2) throw std::runtime_error("viz-filters: bad top_filters tensor");
        Vec flat = t.as_f64();
        std::vector<std::vector<std::size_t>> top(t.dims[0]);
        for (std::size_t c = 0; c < t.dims[0]; ++c)
            for (std::size_t j = 0; j < t.dims[1]; ++j)
                top[c].push_back(static_cast<std::size_t>(flat[c * t.dims[1] + j]));
        write_pgm(out, grouping_mosaic(filters, fd, top));
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatio-temporal synchrony feature learning"};
    app.require_subcommand(1);

    ConfigArgs gen_cfg, train_cfg, extract_cfg, eval_cfg;

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic patch dataset");
    std::string gen_kind, gen_out;
    gen->add_option("--kind", gen_kind, "translations | sinusoids");
    gen->add_option("--out", gen_out, "output dataset directory")->required();
    add_config_options(gen, gen_cfg);

    auto* train = app.add_subcommand("train", "fit whitening and train a model");
    std::string train_model, train_data, train_out;
    train->add_option("--model", train_model, "skmeans | sae | kmeans | ae-baseline")->required();
    train->add_option("--data", train_data, "training dataset directory")->required();
    train->add_option("--out", train_out, "output model directory")->required();
    add_config_options(train, train_cfg);

    auto* extract = app.add_subcommand("extract", "extract descriptors and word histograms");
    std::string ex_model, ex_videos, ex_out, ex_features;
    bool ex_dump = false;
    extract->add_option("--model", ex_model, "trained model directory")->required();
    extract->add_option("--videos", ex_videos, "video dataset directory")->required();
    extract->add_option("--out", ex_out, "output directory")->required();
    extract->add_option("--features", ex_features,
                        "reuse an existing feature space (PCA + vocabulary)");
    extract->add_flag("--dump-descriptors", ex_dump, "also write per-super-block descriptors");
    add_config_options(extract, extract_cfg);

    auto* eval = app.add_subcommand("eval", "classify histograms and report accuracy");
    std::string ev_train, ev_test, ev_out;
    bool ev_loo = false;
    eval->add_option("--train", ev_train, "training histogram directory")->required();
    eval->add_option("--test", ev_test, "test histogram directory");
    eval->add_flag("--loo", ev_loo, "leave-one-out over the training set");
    eval->add_option("--out", ev_out, "report output directory")->required();
    add_config_options(eval, eval_cfg);

    auto* viz = app.add_subcommand("viz-filters", "export a PGM filter mosaic");
    std::string vz_model, vz_out, vz_pooling;
    viz->add_option("--model", vz_model, "trained model directory")->required();
    viz->add_option("--out", vz_out, "output .pgm path")->required();
    viz->add_option("--pooling", vz_pooling, "pooling directory: emit the grouping mosaic");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(gen_kind, gen_out, gen_cfg);
        if (train->parsed()) return cmd_train(train_model, train_data, train_out, train_cfg);
        if (extract->parsed())
            return cmd_extract(ex_model, ex_videos, ex_out, ex_features, ex_dump, extract_cfg);
        if (eval->parsed()) return cmd_eval(ev_train, ev_test, ev_loo, ev_out, eval_cfg);
        if (viz->parsed()) return cmd_viz(vz_model, vz_out, vz_pooling);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
