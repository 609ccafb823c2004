#include "stsync/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stsync/kernels.hpp"

namespace stsync {

Dims3 DescriptorConfig::super_strides() const {
    auto stride = [this](std::size_t extent) {
        double s = std::floor(static_cast<double>(extent) * (1.0 - overlap_fraction));
        return std::max<std::size_t>(1, static_cast<std::size_t>(s));
    };
    return {stride(super_dims.t), stride(super_dims.h), stride(super_dims.w)};
}

std::size_t DescriptorConfig::sub_blocks_per_super() const {
    return crop_count_1d(super_dims.t, sub_dims.t, sub_stride) *
           crop_count_1d(super_dims.h, sub_dims.h, sub_stride) *
           crop_count_1d(super_dims.w, sub_dims.w, sub_stride);
}

Vec extract_pre_descriptor(const Encoder& encoder, const WhiteningTransform& whitening,
                           const VideoBlock& super_block, const DescriptorConfig& cfg) {
    if (!(super_block.dims == cfg.super_dims))
        throw std::invalid_argument("extract_descriptor: super block dims do not match config");
    if (whitening.input_dim() != cfg.sub_dims.count())
        throw std::invalid_argument("extract_descriptor: whitening does not match sub-block size");

    auto subs = crop_blocks(super_block, cfg.sub_dims,
                            {cfg.sub_stride, cfg.sub_stride, cfg.sub_stride});
    Vec out;
    for (const auto& sub : subs) {
        Vec h = encoder(whitening.apply(sub.values));
        out.insert(out.end(), h.begin(), h.end());
    }
    return out;
}

Vec extract_descriptor(const Encoder& encoder, const WhiteningTransform& whitening,
                       const VideoBlock& super_block, const DescriptorConfig& cfg,
                       const PcaProjection& descriptor_pca) {
    if (descriptor_pca.components.empty())
        throw std::invalid_argument("extract_descriptor: descriptor PCA not fitted");
    Vec pre = extract_pre_descriptor(encoder, whitening, super_block, cfg);
    if (pre.size() != descriptor_pca.input_dim())
        throw std::invalid_argument("extract_descriptor: descriptor PCA input size mismatch");
    return descriptor_pca.project(pre);
}

std::vector<VideoBlock> dense_superblocks(const VideoBlock& video, const DescriptorConfig& cfg) {
    if (video.dims.t < cfg.super_dims.t || video.dims.h < cfg.super_dims.h ||
        video.dims.w < cfg.super_dims.w)
        throw std::invalid_argument("dense_superblocks: video smaller than one super block");
    return crop_blocks(video, cfg.super_dims, cfg.super_strides());
}

namespace {

Mat rows_from_vectors(const std::vector<Vec>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("kmeans input: no samples");
    Mat m(vectors.size(), vectors.front().size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != m.cols)
            throw std::invalid_argument("kmeans input: inconsistent dimensions");
        std::copy(vectors[i].begin(), vectors[i].end(), m.row(i));
    }
    return m;
}

} // namespace

Codebook build_vocabulary(const std::vector<Vec>& descriptors, std::size_t k,
                          std::uint64_t seed, std::size_t iterations) {
    Mat data = rows_from_vectors(descriptors);
    return lloyd_kmeans(data, k, seed, iterations).codebook;
}

PoolingResult pool_features(const std::vector<Vec>& hidden_vectors, std::size_t centroids,
                            std::uint64_t seed, std::size_t iterations) {
    Mat data = rows_from_vectors(hidden_vectors);
    PoolingResult res;
    res.codebook = lloyd_kmeans(data, centroids, seed, iterations).codebook;

    const std::size_t q = res.codebook.dim();
    const std::size_t top = std::min<std::size_t>(6, q);
    res.top_filters.resize(res.codebook.k());
    for (std::size_t c = 0; c < res.codebook.k(); ++c) {
        std::vector<std::size_t> idx(q);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        const double* row = res.codebook.centroids.row(c);
        std::stable_sort(idx.begin(), idx.end(),
                         [row](std::size_t a, std::size_t b) { return row[a] > row[b]; });
        res.top_filters[c].assign(idx.begin(), idx.begin() + static_cast<long>(top));
    }
    return res;
}

Histogram video_histogram(const VideoBlock& video, const Encoder& encoder,
                          const WhiteningTransform& whitening, const Codebook& vocabulary,
                          const PcaProjection& descriptor_pca, const DescriptorConfig& cfg) {
    auto supers = dense_superblocks(video, cfg);
    Histogram h;
    h.weights.assign(vocabulary.k(), 0.0);
    for (const auto& sb : supers) {
        Vec d = extract_descriptor(encoder, whitening, sb, cfg, descriptor_pca);
        h.weights[nearest_centroid(vocabulary, d)] += 1.0;
    }
    double total = 0.0;
    for (double w : h.weights) total += w;
    if (total > 0.0)
        for (auto& w : h.weights) w /= total;
    return h;
}

} // namespace stsync
