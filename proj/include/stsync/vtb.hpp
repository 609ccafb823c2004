#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace stsync::vtb {

// VTB binary tensor file: magic "VTB1", u8 dtype code (1=f32, 2=f64, 3=u8),
// u8 ndim, ndim x u64 dims (little-endian), then the raw row-major payload.

enum class DType : std::uint8_t { F32 = 1, F64 = 2, U8 = 3 };

std::size_t dtype_size(DType d);

struct Tensor {
    DType dtype = DType::F64;
    std::vector<std::uint64_t> dims;
    std::vector<std::uint8_t> data; // raw little-endian payload

    std::size_t count() const;

    // converting accessors
    std::vector<double> as_f64() const;
    std::vector<float> as_f32() const;
    std::vector<std::uint8_t> as_u8() const;

    static Tensor from_f64(std::vector<std::uint64_t> dims, std::span<const double> values);
    static Tensor from_f32(std::vector<std::uint64_t> dims, std::span<const float> values);
    static Tensor from_u8(std::vector<std::uint64_t> dims, std::span<const std::uint8_t> values);
};

void write(const std::filesystem::path& path, const Tensor& t);
Tensor read(const std::filesystem::path& path);

} // namespace stsync::vtb
