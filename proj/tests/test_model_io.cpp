#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "stsync/dataset.hpp"
#include "stsync/model_io.hpp"
#include "stsync/pgm.hpp"
#include "stsync/rng.hpp"

using namespace stsync;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
    auto p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

WhiteningTransform small_whitening(Dims3 dims, std::uint64_t seed) {
    auto sources = make_smooth_images(2, 32, 32, seed);
    auto ds = generate_translating_patches(sources, 80, dims, 1, seed);
    return fit_dataset_whitening(ds, ModelMode::Sequence, {}, 0, seed);
}

} // namespace

TEST_CASE("skmeans bundle round-trips bit-exactly") {
    auto wt = small_whitening({2, 4, 4}, 3);
    ModelBundle b;
    b.kind = ModelKind::SkMeans;
    b.skmeans = SkMeansModel::init_sequence(5, wt.retained_dims, 7);
    b.skmeans.frame_dims = Dims3{2, 4, 4};
    b.whitening = wt;

    auto dir = temp_dir("stsync_bundle_skmeans");
    save_model_bundle(dir, b);
    auto back = load_model_bundle(dir);
    CHECK(back.kind == ModelKind::SkMeans);
    CHECK(back.skmeans.mode == ModelMode::Sequence);
    CHECK(back.skmeans.w.v == b.skmeans.w.v);
    CHECK(back.skmeans.frame_dims == b.skmeans.frame_dims);
    CHECK(back.whitening.mean == wt.mean);
    CHECK(back.whitening.forward.v == wt.forward.v);
    CHECK(back.whitening.inverse.v == wt.inverse.v);
    CHECK(back.whitening.eigenvalues == wt.eigenvalues);
    CHECK(back.whitening.retained_dims == wt.retained_dims);
}

TEST_CASE("pair-mode sae bundle keeps both banks, lambda and tied flag") {
    auto wt = small_whitening({2, 4, 4}, 5);
    // pair models whiten single frames
    auto sources = make_smooth_images(2, 32, 32, 5);
    auto ds = generate_translating_patches(sources, 80, {2, 4, 4}, 1, 5);
    auto wtp = fit_dataset_whitening(ds, ModelMode::Pair, {}, 0, 5);

    ModelBundle b;
    b.kind = ModelKind::Sae;
    b.sae = SaeModel::init_pair(4, wtp.retained_dims, 9, 1.25, true);
    b.sae.frame_dims = Dims3{1, 4, 4};
    b.whitening = wtp;

    auto dir = temp_dir("stsync_bundle_sae");
    save_model_bundle(dir, b);
    auto back = load_model_bundle(dir);
    CHECK(back.sae.mode == ModelMode::Pair);
    CHECK(back.sae.tied);
    CHECK(back.sae.lambda == doctest::Approx(1.25));
    CHECK(back.sae.wx.v == b.sae.wx.v);
    CHECK(back.sae.wy.v == b.sae.wy.v);
}

TEST_CASE("baseline bundles round-trip") {
    auto wt = small_whitening({2, 4, 4}, 11);
    {
        ModelBundle b;
        b.kind = ModelKind::KMeans;
        b.centroids = init_centroids(6, wt.retained_dims, 2);
        b.whitening = wt;
        auto dir = temp_dir("stsync_bundle_kmeans");
        save_model_bundle(dir, b);
        auto back = load_model_bundle(dir);
        CHECK(back.centroids.v == b.centroids.v);
    }
    {
        ModelBundle b;
        b.kind = ModelKind::Ae;
        b.ae = AeModel::init(6, wt.retained_dims, 2, 0.75);
        b.whitening = wt;
        auto dir = temp_dir("stsync_bundle_ae");
        save_model_bundle(dir, b);
        auto back = load_model_bundle(dir);
        CHECK(back.ae.w.v == b.ae.w.v);
        CHECK(back.ae.lambda == doctest::Approx(0.75));
    }
}

TEST_CASE("encoder output matches direct inference after a round-trip") {
    auto wt = small_whitening({2, 4, 4}, 13);
    ModelBundle b;
    b.kind = ModelKind::SkMeans;
    b.skmeans = SkMeansModel::init_sequence(5, wt.retained_dims, 1);
    b.whitening = wt;
    auto dir = temp_dir("stsync_bundle_enc");
    save_model_bundle(dir, b);
    auto back = load_model_bundle(dir);

    Rng rng(2);
    Vec x(wt.input_dim());
    for (auto& v : x) v = rng.normal();
    Vec z = wt.apply(x);
    CHECK(back.encoder()(z) == infer_seq(b.skmeans, z));
}

TEST_CASE("non-model directories are rejected") {
    auto dir = temp_dir("stsync_not_a_model");
    fs::create_directories(dir);
    CHECK_THROWS(load_model_bundle(dir)); // no manifest at all
    std::ofstream(dir / "manifest.txt") << "format = something-else\n";
    CHECK_THROWS(load_model_bundle(dir));
}

TEST_CASE("feature space round-trips") {
    Rng rng(4);
    FeatureSpace fspace;
    fspace.descriptor_pca.mean = Vec(12);
    fspace.descriptor_pca.components = Mat(3, 12);
    fspace.descriptor_pca.eigenvalues = Vec(12);
    for (auto& v : fspace.descriptor_pca.mean) v = rng.normal();
    for (auto& v : fspace.descriptor_pca.components.v) v = rng.normal();
    for (auto& v : fspace.descriptor_pca.eigenvalues) v = rng.uniform();
    fspace.vocabulary.centroids = Mat(5, 3);
    for (auto& v : fspace.vocabulary.centroids.v) v = rng.normal();
    fspace.vocabulary.training_seed = 77;

    auto dir = temp_dir("stsync_features");
    save_feature_space(dir, fspace);
    auto back = load_feature_space(dir);
    CHECK(back.descriptor_pca.mean == fspace.descriptor_pca.mean);
    CHECK(back.descriptor_pca.components.v == fspace.descriptor_pca.components.v);
    CHECK(back.vocabulary.centroids.v == fspace.vocabulary.centroids.v);
    CHECK(back.vocabulary.training_seed == 77);
}

TEST_CASE("filter mosaic geometry and scaling") {
    Mat filters(3, 2 * 2 * 3); // 3 filters, 2 frames of 2x3
    Rng rng(5);
    for (auto& v : filters.v) v = rng.normal();
    // filter 1 constant: degenerate scaling maps to mid-gray
    for (std::size_t i = 0; i < 12; ++i) filters(1, i) = 4.2;

    GrayImage img = filter_mosaic(filters, {2, 2, 3});
    // rows = Q*(H+1)+1, cols = T*(W+1)+1
    CHECK(img.rows == 3 * 3 + 1);
    CHECK(img.cols == 2 * 4 + 1);
    // constant filter tile is uniform 128
    CHECK(img.pixels[(1 + 1 * 3) * img.cols + 1] == 128);
    CHECK(img.pixels[(2 + 1 * 3) * img.cols + 5] == 128);
    // gaps stay at 0
    CHECK(img.pixels[0] == 0);
    CHECK(img.pixels[3 * img.cols + 4] == 0);

    // every non-degenerate filter spans the full range
    bool has0 = false, has255 = false;
    for (std::size_t r = 1; r < 3; ++r)
        for (std::size_t c = 1; c < img.cols - 1; ++c) {
            auto p = img.pixels[r * img.cols + c];
            if (p == 0 && c != 4) has0 = true; // skip the gap column
            if (p == 255) has255 = true;
        }
    CHECK(has0);
    CHECK(has255);
}

TEST_CASE("pgm writer emits a valid P5 header") {
    GrayImage img;
    img.rows = 2;
    img.cols = 3;
    img.pixels = {0, 50, 100, 150, 200, 250};
    auto p = fs::temp_directory_path() / "stsync_test.pgm";
    write_pgm(p, img);
    std::ifstream in(p, std::ios::binary);
    std::string magic;
    std::size_t w, h;
    int maxv;
    in >> magic >> w >> h >> maxv;
    CHECK(magic == "P5");
    CHECK(w == 3);
    CHECK(h == 2);
    CHECK(maxv == 255);
    in.get(); // single whitespace after header
    std::vector<char> data(6);
    in.read(data.data(), 6);
    CHECK(static_cast<unsigned char>(data[5]) == 250);

    GrayImage bad;
    bad.rows = 2;
    bad.cols = 2;
    bad.pixels = {1, 2, 3};
    CHECK_THROWS(write_pgm(p, bad));
}

TEST_CASE("grouping mosaic uses first-frame tiles") {
    Mat filters(4, 2 * 2 * 2);
    Rng rng(9);
    for (auto& v : filters.v) v = rng.normal();
    std::vector<std::vector<std::size_t>> top = {{0, 2}, {3, 1}};
    GrayImage img = grouping_mosaic(filters, {2, 2, 2}, top);
    CHECK(img.rows == 2 * 3 + 1);
    CHECK(img.cols == 2 * 3 + 1);
    std::vector<std::vector<std::size_t>> bad = {{7}};
    CHECK_THROWS(grouping_mosaic(filters, {2, 2, 2}, bad));
}
