#pragma once

#include <cstddef>
#include <vector>

#include "stsync/linalg.hpp"

namespace stsync {

struct Dims3 {
    std::size_t t = 0, h = 0, w = 0;
    std::size_t count() const { return t * h * w; }
    bool operator==(const Dims3&) const = default;
};

// Dense T x H x W scalar tensor, row-major within a frame, frame-major
// overall: values[(f*H + r)*W + c].
struct VideoBlock {
    Dims3 dims;
    Vec values;

    VideoBlock() = default;
    VideoBlock(Dims3 d, double fill = 0.0) : dims(d), values(d.count(), fill) {}

    double& at(std::size_t f, std::size_t r, std::size_t c) {
        return values[(f * dims.h + r) * dims.w + c];
    }
    double at(std::size_t f, std::size_t r, std::size_t c) const {
        return values[(f * dims.h + r) * dims.w + c];
    }

    void validate() const; // throws on dims/count mismatch or non-finite values
};

// All crops of size block_dims at grid offsets (i*st, j*sh, k*sw) fully
// inside the video; frame-major, then row, then column ordering.
std::vector<VideoBlock> crop_blocks(const VideoBlock& video, Dims3 block_dims, Dims3 strides);

// blocks per axis: floor((extent - block)/stride) + 1
std::size_t crop_count_1d(std::size_t extent, std::size_t block, std::size_t stride);

} // namespace stsync
