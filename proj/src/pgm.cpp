#include "stsync/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stsync {

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    if (img.pixels.size() != img.rows * img.cols)
        throw std::invalid_argument("write_pgm: pixel buffer does not match dimensions");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_pgm: cannot open " + path.string());
    f << "P5\n" << img.cols << " " << img.rows << "\n255\n";
    f.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!f) throw std::runtime_error("write_pgm: write failed for " + path.string());
}

namespace {

constexpr std::size_t kGap = 1;

// per-filter min-max to [0,255]; constant filters map to 128
std::vector<std::uint8_t> scale_filter(const double* v, std::size_t n) {
    double lo = v[0], hi = v[0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
    }
    std::vector<std::uint8_t> out(n, 128);
    if (hi > lo) {
        for (std::size_t i = 0; i < n; ++i) {
            double u = (v[i] - lo) / (hi - lo);
            out[i] = static_cast<std::uint8_t>(std::lround(u * 255.0));
        }
    }
    return out;
}

void blit(GrayImage& img, std::size_t r0, std::size_t c0, const std::uint8_t* tile,
          std::size_t h, std::size_t w) {
    for (std::size_t r = 0; r < h; ++r)
        std::copy(tile + r * w, tile + (r + 1) * w,
                  img.pixels.begin() + static_cast<long>((r0 + r) * img.cols + c0));
}

} // namespace

GrayImage filter_mosaic(const Mat& pixel_filters, Dims3 frame_dims) {
    const std::size_t t = frame_dims.t, h = frame_dims.h, w = frame_dims.w;
    if (pixel_filters.cols != frame_dims.count())
        throw std::invalid_argument("filter_mosaic: filter length does not match frame dims");
    if (pixel_filters.rows == 0) throw std::invalid_argument("filter_mosaic: no filters");

    GrayImage img;
    img.rows = pixel_filters.rows * (h + kGap) + kGap;
    img.cols = t * (w + kGap) + kGap;
    img.pixels.assign(img.rows * img.cols, 0);

    for (std::size_t q = 0; q < pixel_filters.rows; ++q) {
        auto scaled = scale_filter(pixel_filters.row(q), pixel_filters.cols);
        for (std::size_t f = 0; f < t; ++f)
            blit(img, kGap + q * (h + kGap), kGap + f * (w + kGap),
                 scaled.data() + f * h * w, h, w);
    }
    return img;
}

GrayImage grouping_mosaic(const Mat& pixel_filters, Dims3 frame_dims,
                          const std::vector<std::vector<std::size_t>>& top_filters) {
    const std::size_t h = frame_dims.h, w = frame_dims.w;
    if (pixel_filters.cols != frame_dims.count())
        throw std::invalid_argument("grouping_mosaic: filter length does not match frame dims");
    if (top_filters.empty()) throw std::invalid_argument("grouping_mosaic: no centroids");

    std::size_t top = 0;
    for (const auto& row : top_filters) top = std::max(top, row.size());
    if (top == 0) throw std::invalid_argument("grouping_mosaic: empty filter lists");

    GrayImage img;
    img.rows = top_filters.size() * (h + kGap) + kGap;
    img.cols = top * (w + kGap) + kGap;
    img.pixels.assign(img.rows * img.cols, 0);

    for (std::size_t c = 0; c < top_filters.size(); ++c) {
        for (std::size_t j = 0; j < top_filters[c].size(); ++j) {
            std::size_t q = top_filters[c][j];
            if (q >= pixel_filters.rows)
                throw std::invalid_argument("grouping_mosaic: filter index out of range");
            // first frame only; temporal structure is shown by filter_mosaic
            auto scaled = scale_filter(pixel_filters.row(q), pixel_filters.cols);
            blit(img, kGap + c * (h + kGap), kGap + j * (w + kGap), scaled.data(), h, w);
        }
    }
    return img;
}

} // namespace stsync
