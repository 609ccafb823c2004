#include "stsync/vtb.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace stsync::vtb {

namespace {

constexpr char kMagic[4] = {'V', 'T', 'B', '1'};

// Serialization is explicitly little-endian regardless of host order.
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

bool host_is_little_endian() {
    const std::uint16_t one = 1;
    return *reinterpret_cast<const std::uint8_t*>(&one) == 1;
}

template <typename T>
std::vector<std::uint8_t> pack(std::span<const T> values) {
    std::vector<std::uint8_t> out(values.size() * sizeof(T));
    if (!values.empty()) std::memcpy(out.data(), values.data(), out.size());
    if (!host_is_little_endian()) {
        for (std::size_t i = 0; i < values.size(); ++i)
            std::reverse(out.begin() + i * sizeof(T), out.begin() + (i + 1) * sizeof(T));
    }
    return out;
}

template <typename T>
std::vector<T> unpack(const std::vector<std::uint8_t>& raw) {
    std::vector<T> out(raw.size() / sizeof(T));
    if (!out.empty()) std::memcpy(out.data(), raw.data(), raw.size());
    if (!host_is_little_endian()) {
        for (auto& v : out) {
            auto* p = reinterpret_cast<std::uint8_t*>(&v);
            std::reverse(p, p + sizeof(T));
        }
    }
    return out;
}

} // namespace

std::size_t dtype_size(DType d) {
    switch (d) {
    case DType::F32: return 4;
    case DType::F64: return 8;
    case DType::U8: return 1;
    }
    throw std::runtime_error("vtb: unknown dtype code");
}

std::size_t Tensor::count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= static_cast<std::size_t>(d);
    return dims.empty() ? 0 : n;
}

std::vector<double> Tensor::as_f64() const {
    switch (dtype) {
    case DType::F64: return unpack<double>(data);
    case DType::F32: {
        auto f = unpack<float>(data);
        return {f.begin(), f.end()};
    }
    case DType::U8: return {data.begin(), data.end()};
    }
    throw std::runtime_error("vtb: unknown dtype code");
}

std::vector<float> Tensor::as_f32() const {
    switch (dtype) {
    case DType::F32: return unpack<float>(data);
    case DType::F64: {
        auto d = unpack<double>(data);
        return {d.begin(), d.end()};
    }
    case DType::U8: return {data.begin(), data.end()};
    }
    throw std::runtime_error("vtb: unknown dtype code");
}

std::vector<std::uint8_t> Tensor::as_u8() const {
    if (dtype != DType::U8) throw std::runtime_error("vtb: tensor is not u8");
    return data;
}

Tensor Tensor::from_f64(std::vector<std::uint64_t> dims, std::span<const double> values) {
    Tensor t;
    t.dtype = DType::F64;
    t.dims = std::move(dims);
    t.data = pack(values);
    if (t.count() != values.size()) throw std::invalid_argument("vtb: dims do not match value count");
    return t;
}

Tensor Tensor::from_f32(std::vector<std::uint64_t> dims, std::span<const float> values) {
    Tensor t;
    t.dtype = DType::F32;
    t.dims = std::move(dims);
    t.data = pack(values);
    if (t.count() != values.size()) throw std::invalid_argument("vtb: dims do not match value count");
    return t;
}

Tensor Tensor::from_u8(std::vector<std::uint64_t> dims, std::span<const std::uint8_t> values) {
    Tensor t;
    t.dtype = DType::U8;
    t.dims = std::move(dims);
    t.data.assign(values.begin(), values.end());
    if (t.count() != values.size()) throw std::invalid_argument("vtb: dims do not match value count");
    return t;
}

void write(const std::filesystem::path& path, const Tensor& t) {
    if (t.count() * dtype_size(t.dtype) != t.data.size())
        throw std::invalid_argument("vtb: payload size does not match dims");
    if (t.dims.size() > 255) throw std::invalid_argument("vtb: too many dimensions");

    std::vector<std::uint8_t> header;
    header.insert(header.end(), kMagic, kMagic + 4);
    header.push_back(static_cast<std::uint8_t>(t.dtype));
    header.push_back(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) put_u64(header, d);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("vtb: cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(t.data.data()), static_cast<std::streamsize>(t.data.size()));
    if (!out) throw std::runtime_error("vtb: write failed: " + path.string());
}

Tensor read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("vtb: cannot open: " + path.string());

    std::uint8_t head[6];
    in.read(reinterpret_cast<char*>(head), 6);
    if (!in || std::memcmp(head, kMagic, 4) != 0)
        throw std::runtime_error("vtb: bad magic in " + path.string());

    Tensor t;
    std::uint8_t code = head[4];
    if (code != 1 && code != 2 && code != 3)
        throw std::runtime_error("vtb: unknown dtype code in " + path.string());
    t.dtype = static_cast<DType>(code);

    std::size_t ndim = head[5];
    std::vector<std::uint8_t> dimbuf(ndim * 8);
    in.read(reinterpret_cast<char*>(dimbuf.data()), static_cast<std::streamsize>(dimbuf.size()));
    if (!in) throw std::runtime_error("vtb: truncated header in " + path.string());
    t.dims.resize(ndim);
    for (std::size_t i = 0; i < ndim; ++i) t.dims[i] = get_u64(dimbuf.data() + 8 * i);

    std::size_t payload = t.count() * dtype_size(t.dtype);
    t.data.resize(payload);
    in.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(payload));
    if (in.gcount() != static_cast<std::streamsize>(payload))
        throw std::runtime_error("vtb: truncated payload in " + path.string());
    return t;
}

} // namespace stsync::vtb
