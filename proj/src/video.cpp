#include "stsync/video.hpp"

#include <cmath>
#include <stdexcept>

namespace stsync {

void VideoBlock::validate() const {
    if (dims.t < 1 || dims.h < 1 || dims.w < 1)
        throw std::invalid_argument("VideoBlock: all dims must be >= 1");
    if (values.size() != dims.count())
        throw std::invalid_argument("VideoBlock: value count does not match dims");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("VideoBlock: non-finite value");
}

std::size_t crop_count_1d(std::size_t extent, std::size_t block, std::size_t stride) {
    if (block > extent) throw std::invalid_argument("crop_count_1d: block larger than extent");
    return (extent - block) / stride + 1;
}

std::vector<VideoBlock> crop_blocks(const VideoBlock& video, Dims3 block_dims, Dims3 strides) {
    if (block_dims.t > video.dims.t || block_dims.h > video.dims.h || block_dims.w > video.dims.w)
        throw std::invalid_argument("crop_blocks: block larger than video");
    if (strides.t < 1 || strides.h < 1 || strides.w < 1)
        throw std::invalid_argument("crop_blocks: strides must be >= 1");

    std::size_t nt = crop_count_1d(video.dims.t, block_dims.t, strides.t);
    std::size_t nh = crop_count_1d(video.dims.h, block_dims.h, strides.h);
    std::size_t nw = crop_count_1d(video.dims.w, block_dims.w, strides.w);

    std::vector<VideoBlock> out;
    out.reserve(nt * nh * nw);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nh; ++j)
            for (std::size_t k = 0; k < nw; ++k) {
                VideoBlock b(block_dims);
                std::size_t t0 = i * strides.t, r0 = j * strides.h, c0 = k * strides.w;
                for (std::size_t f = 0; f < block_dims.t; ++f)
                    for (std::size_t r = 0; r < block_dims.h; ++r)
                        for (std::size_t c = 0; c < block_dims.w; ++c)
                            b.at(f, r, c) = video.at(t0 + f, r0 + r, c0 + c);
                out.push_back(std::move(b));
            }
    return out;
}

} // namespace stsync
