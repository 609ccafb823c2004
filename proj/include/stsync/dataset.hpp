#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "stsync/linalg.hpp"
#include "stsync/video.hpp"

namespace stsync {

// 2-D grayscale image, row-major.
struct Image2D {
    std::size_t rows = 0, cols = 0;
    Vec values;

    Image2D() = default;
    Image2D(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct PatchDataset {
    std::vector<VideoBlock> patches; // uniform dims
    std::optional<std::vector<std::int64_t>> labels;
    std::uint64_t seed = 0;

    Dims3 dims() const { return patches.empty() ? Dims3{} : patches.front().dims; }
    void validate() const;
};

// Which per-patch displacements the translation generator draws from.
enum class ShiftSet {
    FullGrid, // (dx, dy) uniform over [-max_shift, max_shift]^2
    Cardinal, // up/down/left/right at magnitude max_shift; labels 0..3
};

// Each patch is a T-frame crop where frame t is the frame-0 window shifted
// by t*(dx, dy). Shifts are genuine crops from an enlarged source window:
// no wraparound, no padding. Labels encode (dx, dy):
//   FullGrid: (dy + m)*(2m + 1) + (dx + m)
//   Cardinal: 0 = up, 1 = down, 2 = left, 3 = right
PatchDataset generate_translating_patches(const std::vector<Image2D>& source,
                                          std::size_t count, Dims3 dims,
                                          int max_shift, std::uint64_t seed,
                                          ShiftSet shift_set = ShiftSet::FullGrid);

// x1[i] = sin(2*pi*freq*i + phase); x2 is x1 circularly shifted right by
// `shift` samples. freq must lie in (0, 0.5).
std::pair<Vec, Vec> generate_sinusoid_pair(std::size_t n, double freq, double phase, long shift);

// (v - mean(v)) / max(||v - mean(v)||, epsilon)
Vec contrast_normalize(const Vec& v, double epsilon = 1e-10);
void contrast_normalize_inplace(double* v, std::size_t n, double epsilon = 1e-10);

// Smooth pseudo-natural test images: seeded white noise put through a few
// binomial blur passes, then standardized.
std::vector<Image2D> make_smooth_images(std::size_t count, std::size_t rows, std::size_t cols,
                                        std::uint64_t seed, int blur_passes = 4);

// Dataset on disk: a directory with patches.vtb [count,T,H,W], optional
// labels.vtb [count], and a key=value manifest.
void save_dataset(const std::filesystem::path& dir, const PatchDataset& ds);
PatchDataset load_dataset(const std::filesystem::path& dir);

// Flattening order used everywhere: frame-major, then row, then column.
Vec flatten(const VideoBlock& b);

} // namespace stsync
