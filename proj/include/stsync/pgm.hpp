#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "stsync/linalg.hpp"
#include "stsync/video.hpp"

namespace stsync {

struct GrayImage {
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint8_t> pixels; // row-major
};

// binary PGM (P5, maxval 255)
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

// One row per filter, T frame-tiles per row, 1-px gap grid. Filters are
// min-max scaled per filter; a degenerate (constant) filter maps to mid-gray
// 128. Mosaic size: rows = Q*(H+1)+1, cols = T*(W+1)+1.
GrayImage filter_mosaic(const Mat& pixel_filters, Dims3 frame_dims);

// Pooling report mosaic: one row per centroid, first-frame tiles of its top
// filters. Same gap/scaling rules; cols = top*(W+1)+1.
GrayImage grouping_mosaic(const Mat& pixel_filters, Dims3 frame_dims,
                          const std::vector<std::vector<std::size_t>>& top_filters);

} // namespace stsync
