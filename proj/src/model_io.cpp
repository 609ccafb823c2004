#include "stsync/model_io.hpp"

#include <stdexcept>

#include "stsync/config.hpp"
#include "stsync/vtb.hpp"

namespace stsync {

namespace {

namespace fs = std::filesystem;

vtb::Tensor mat_tensor(const Mat& m) {
    return vtb::Tensor::from_f64({m.rows, m.cols}, m.v);
}

vtb::Tensor vec_tensor(const Vec& v) {
    return vtb::Tensor::from_f64({v.size()}, v);
}

Mat read_mat(const fs::path& path) {
    vtb::Tensor t = vtb::read(path);
    if (t.dims.size() != 2)
        throw std::runtime_error("model bundle: expected a matrix in " + path.string());
    Mat m(static_cast<std::size_t>(t.dims[0]), static_cast<std::size_t>(t.dims[1]));
    m.v = t.as_f64();
    return m;
}

Vec read_vec(const fs::path& path) {
    vtb::Tensor t = vtb::read(path);
    if (t.dims.size() != 1)
        throw std::runtime_error("model bundle: expected a vector in " + path.string());
    return t.as_f64();
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key,
                        const fs::path& dir) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::runtime_error("model bundle " + dir.string() + ": manifest missing key '" +
                                 key + "'");
    return it->second;
}

void write_whitening(const fs::path& dir, const WhiteningTransform& wt,
                     std::map<std::string, std::string>& kv) {
    vtb::write(dir / "whitening_mean.vtb", vec_tensor(wt.mean));
    vtb::write(dir / "whitening_forward.vtb", mat_tensor(wt.forward));
    vtb::write(dir / "whitening_inverse.vtb", mat_tensor(wt.inverse));
    vtb::write(dir / "whitening_eigenvalues.vtb", vec_tensor(wt.eigenvalues));
    kv["whitening.retained_dims"] = std::to_string(wt.retained_dims);
    kv["whitening.eigenvalue_floor"] = std::to_string(wt.eigenvalue_floor);
}

WhiteningTransform read_whitening(const fs::path& dir,
                                  const std::map<std::string, std::string>& kv) {
    WhiteningTransform wt;
    wt.mean = read_vec(dir / "whitening_mean.vtb");
    wt.forward = read_mat(dir / "whitening_forward.vtb");
    wt.inverse = read_mat(dir / "whitening_inverse.vtb");
    wt.eigenvalues = read_vec(dir / "whitening_eigenvalues.vtb");
    wt.retained_dims = std::stoul(need(kv, "whitening.retained_dims", dir));
    wt.eigenvalue_floor = std::stod(need(kv, "whitening.eigenvalue_floor", dir));
    return wt;
}

void write_frame_dims(const std::optional<Dims3>& fd, std::map<std::string, std::string>& kv) {
    if (!fd) return;
    kv["frames"] = std::to_string(fd->t);
    kv["height"] = std::to_string(fd->h);
    kv["width"] = std::to_string(fd->w);
}

std::optional<Dims3> read_frame_dims(const std::map<std::string, std::string>& kv) {
    auto it = kv.find("frames");
    if (it == kv.end()) return std::nullopt;
    Dims3 d;
    d.t = std::stoul(it->second);
    d.h = std::stoul(kv.at("height"));
    d.w = std::stoul(kv.at("width"));
    return d;
}

const char* mode_name(ModelMode m) { return m == ModelMode::Pair ? "pair" : "sequence"; }

ModelMode mode_from_name(const std::string& s, const fs::path& dir) {
    if (s == "pair") return ModelMode::Pair;
    if (s == "sequence") return ModelMode::Sequence;
    throw std::runtime_error("model bundle " + dir.string() + ": unknown mode '" + s + "'");
}

} // namespace

std::string model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::SkMeans: return "skmeans";
        case ModelKind::Sae: return "sae";
        case ModelKind::KMeans: return "kmeans";
        case ModelKind::Ae: return "ae";
    }
    throw std::logic_error("model_kind_name: bad kind");
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "skmeans") return ModelKind::SkMeans;
    if (name == "sae") return ModelKind::Sae;
    if (name == "kmeans") return ModelKind::KMeans;
    if (name == "ae") return ModelKind::Ae;
    throw std::runtime_error("unknown model kind '" + name + "'");
}

std::size_t ModelBundle::q() const {
    switch (kind) {
        case ModelKind::SkMeans: return skmeans.q();
        case ModelKind::Sae: return sae.q();
        case ModelKind::KMeans: return centroids.rows;
        case ModelKind::Ae: return ae.w.rows;
    }
    throw std::logic_error("ModelBundle::q: bad kind");
}

Encoder ModelBundle::encoder() const {
    switch (kind) {
        case ModelKind::SkMeans:
            if (skmeans.mode != ModelMode::Sequence)
                throw std::invalid_argument("encoder: pair-mode model cannot encode blocks");
            return [m = skmeans](const Vec& z) { return infer_seq(m, z); };
        case ModelKind::Sae:
            if (sae.mode != ModelMode::Sequence)
                throw std::invalid_argument("encoder: pair-mode model cannot encode blocks");
            return [m = sae](const Vec& z) { return encode_seq(m, z).h; };
        case ModelKind::KMeans:
            return [c = centroids](const Vec& z) { return standard_kmeans_infer(c, z); };
        case ModelKind::Ae:
            return [m = ae](const Vec& z) { return ae_encode(m, z); };
    }
    throw std::logic_error("ModelBundle::encoder: bad kind");
}

Mat ModelBundle::pixel_filters() const {
    const Mat* w = nullptr;
    switch (kind) {
        case ModelKind::SkMeans:
            w = skmeans.mode == ModelMode::Sequence ? &skmeans.w : &skmeans.wx;
            break;
        case ModelKind::Sae:
            w = sae.mode == ModelMode::Sequence ? &sae.w : &sae.wx;
            break;
        case ModelKind::KMeans: w = &centroids; break;
        case ModelKind::Ae: w = &ae.w; break;
    }
    if (w->cols != whitening.forward.rows)
        throw std::invalid_argument("pixel_filters: model dim does not match whitening");
    Mat out(w->rows, whitening.input_dim());
    for (std::size_t q = 0; q < w->rows; ++q) {
        Vec z(w->row(q), w->row(q) + w->cols);
        Vec px = whitening.apply_inverse(z);
        std::copy(px.begin(), px.end(), out.row(q));
    }
    return out;
}

void save_model_bundle(const std::filesystem::path& dir, const ModelBundle& bundle) {
    fs::create_directories(dir);
    std::map<std::string, std::string> kv;
    kv["format"] = "stsync-model";
    kv["kind"] = model_kind_name(bundle.kind);

    switch (bundle.kind) {
        case ModelKind::SkMeans:
            kv["mode"] = mode_name(bundle.skmeans.mode);
            write_frame_dims(bundle.skmeans.frame_dims, kv);
            if (bundle.skmeans.mode == ModelMode::Pair) {
                vtb::write(dir / "wx.vtb", mat_tensor(bundle.skmeans.wx));
                vtb::write(dir / "wy.vtb", mat_tensor(bundle.skmeans.wy));
            } else {
                vtb::write(dir / "w.vtb", mat_tensor(bundle.skmeans.w));
            }
            break;
        case ModelKind::Sae:
            kv["mode"] = mode_name(bundle.sae.mode);
            kv["tied"] = bundle.sae.tied ? "true" : "false";
            kv["lambda"] = std::to_string(bundle.sae.lambda);
            write_frame_dims(bundle.sae.frame_dims, kv);
            if (bundle.sae.mode == ModelMode::Pair) {
                vtb::write(dir / "wx.vtb", mat_tensor(bundle.sae.wx));
                vtb::write(dir / "wy.vtb", mat_tensor(bundle.sae.wy));
            } else {
                vtb::write(dir / "w.vtb", mat_tensor(bundle.sae.w));
            }
            break;
        case ModelKind::KMeans:
            vtb::write(dir / "w.vtb", mat_tensor(bundle.centroids));
            break;
        case ModelKind::Ae:
            kv["lambda"] = std::to_string(bundle.ae.lambda);
            vtb::write(dir / "w.vtb", mat_tensor(bundle.ae.w));
            break;
    }

    write_whitening(dir, bundle.whitening, kv);
    write_kv_file(dir / "manifest.txt", kv);
}

ModelBundle load_model_bundle(const std::filesystem::path& dir) {
    auto kv = read_kv_file(dir / "manifest.txt");
    if (need(kv, "format", dir) != "stsync-model")
        throw std::runtime_error("model bundle " + dir.string() + ": not a model directory");

    ModelBundle b;
    b.kind = model_kind_from_name(need(kv, "kind", dir));
    b.whitening = read_whitening(dir, kv);

    switch (b.kind) {
        case ModelKind::SkMeans:
            b.skmeans.mode = mode_from_name(need(kv, "mode", dir), dir);
            b.skmeans.frame_dims = read_frame_dims(kv);
            if (b.skmeans.mode == ModelMode::Pair) {
                b.skmeans.wx = read_mat(dir / "wx.vtb");
                b.skmeans.wy = read_mat(dir / "wy.vtb");
            } else {
                b.skmeans.w = read_mat(dir / "w.vtb");
            }
            break;
        case ModelKind::Sae:
            b.sae.mode = mode_from_name(need(kv, "mode", dir), dir);
            b.sae.tied = need(kv, "tied", dir) == "true";
            b.sae.lambda = std::stod(need(kv, "lambda", dir));
            b.sae.frame_dims = read_frame_dims(kv);
            if (b.sae.mode == ModelMode::Pair) {
                b.sae.wx = read_mat(dir / "wx.vtb");
                b.sae.wy = read_mat(dir / "wy.vtb");
            } else {
                b.sae.w = read_mat(dir / "w.vtb");
            }
            break;
        case ModelKind::KMeans:
            b.centroids = read_mat(dir / "w.vtb");
            break;
        case ModelKind::Ae:
            b.ae.lambda = std::stod(need(kv, "lambda", dir));
            b.ae.w = read_mat(dir / "w.vtb");
            break;
    }
    return b;
}

void save_feature_space(const std::filesystem::path& dir, const FeatureSpace& fs_) {
    fs::create_directories(dir);
    std::map<std::string, std::string> kv;
    kv["format"] = "stsync-features";
    kv["vocab.training_seed"] = std::to_string(fs_.vocabulary.training_seed);
    vtb::write(dir / "pca_mean.vtb", vec_tensor(fs_.descriptor_pca.mean));
    vtb::write(dir / "pca_components.vtb", mat_tensor(fs_.descriptor_pca.components));
    vtb::write(dir / "pca_eigenvalues.vtb", vec_tensor(fs_.descriptor_pca.eigenvalues));
    vtb::write(dir / "vocabulary.vtb", mat_tensor(fs_.vocabulary.centroids));
    write_kv_file(dir / "manifest.txt", kv);
}

FeatureSpace load_feature_space(const std::filesystem::path& dir) {
    auto kv = read_kv_file(dir / "manifest.txt");
    if (need(kv, "format", dir) != "stsync-features")
        throw std::runtime_error("feature space " + dir.string() + ": not a feature directory");
    FeatureSpace fs_;
    fs_.descriptor_pca.mean = read_vec(dir / "pca_mean.vtb");
    fs_.descriptor_pca.components = read_mat(dir / "pca_components.vtb");
    fs_.descriptor_pca.eigenvalues = read_vec(dir / "pca_eigenvalues.vtb");
    fs_.vocabulary.centroids = read_mat(dir / "vocabulary.vtb");
    fs_.vocabulary.training_seed = std::stoull(need(kv, "vocab.training_seed", dir));
    return fs_;
}

} // namespace stsync
