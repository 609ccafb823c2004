#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stsync/classify.hpp"
#include "stsync/kmeans.hpp"
#include "stsync/linalg.hpp"
#include "stsync/video.hpp"
#include "stsync/whitening.hpp"

namespace stsync {

struct DescriptorConfig {
    Dims3 super_dims{14, 20, 20};
    Dims3 sub_dims{10, 16, 16};
    std::size_t sub_stride = 4;
    double overlap_fraction = 0.5; // between neighboring super blocks
    std::size_t descriptor_pca_dims = 100;
    std::size_t vocab_size = 3000;
    std::size_t pooling_centroids = 500;

    Dims3 super_strides() const; // derived from overlap_fraction
    std::size_t sub_blocks_per_super() const;
};

// Maps one whitened sub-block to its hidden vector. Adapts any of the
// trained models (SK-means, SAE, baselines) to the descriptor pipeline.
using Encoder = std::function<Vec(const Vec&)>;

// crop sub-blocks, whiten, encode, concatenate (pre-PCA descriptor)
Vec extract_pre_descriptor(const Encoder& encoder, const WhiteningTransform& whitening,
                           const VideoBlock& super_block, const DescriptorConfig& cfg);

// pre-descriptor projected by the descriptor-level PCA
Vec extract_descriptor(const Encoder& encoder, const WhiteningTransform& whitening,
                       const VideoBlock& super_block, const DescriptorConfig& cfg,
                       const PcaProjection& descriptor_pca);

// dense 50%-overlap super-block grid
std::vector<VideoBlock> dense_superblocks(const VideoBlock& video, const DescriptorConfig& cfg);

Codebook build_vocabulary(const std::vector<Vec>& descriptors, std::size_t k,
                          std::uint64_t seed, std::size_t iterations);

struct PoolingResult {
    Codebook codebook;
    // per centroid: model filter indices with the largest centroid weight,
    // descending (at most 6)
    std::vector<std::vector<std::size_t>> top_filters;
};

PoolingResult pool_features(const std::vector<Vec>& hidden_vectors, std::size_t centroids,
                            std::uint64_t seed, std::size_t iterations = 20);

// histogram of spatio-temporal words over the video's dense super blocks
Histogram video_histogram(const VideoBlock& video, const Encoder& encoder,
                          const WhiteningTransform& whitening, const Codebook& vocabulary,
                          const PcaProjection& descriptor_pca, const DescriptorConfig& cfg);

} // namespace stsync
