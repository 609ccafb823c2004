#pragma once

#include <filesystem>
#include <string>

#include "stsync/kmeans.hpp"
#include "stsync/pipeline.hpp"
#include "stsync/sae.hpp"
#include "stsync/skmeans.hpp"
#include "stsync/whitening.hpp"

namespace stsync {

enum class ModelKind { SkMeans, Sae, KMeans, Ae };

std::string model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

// A trained feature model plus the whitening it was fitted on. Serialized as
// a directory: manifest.txt (flat key=value) plus one .vtb per tensor.
struct ModelBundle {
    ModelKind kind = ModelKind::SkMeans;
    SkMeansModel skmeans;
    SaeModel sae;
    Mat centroids; // standard K-means baseline
    AeModel ae;
    WhiteningTransform whitening;

    std::size_t q() const;
    // hidden map over whitened blocks, for the descriptor pipeline
    Encoder encoder() const;
    // filters mapped back through the whitening inverse, one row per unit
    Mat pixel_filters() const;
};

void save_model_bundle(const std::filesystem::path& dir, const ModelBundle& bundle);
ModelBundle load_model_bundle(const std::filesystem::path& dir);

// Descriptor-level PCA and the spatio-temporal word vocabulary, produced by
// the extract stage and shared by eval. Same directory layout.
struct FeatureSpace {
    PcaProjection descriptor_pca;
    Codebook vocabulary;
};

void save_feature_space(const std::filesystem::path& dir, const FeatureSpace& fs);
FeatureSpace load_feature_space(const std::filesystem::path& dir);

} // namespace stsync
