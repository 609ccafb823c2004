#include "stsync/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "stsync/config.hpp"
#include "stsync/kernels.hpp"
#include "stsync/rng.hpp"
#include "stsync/vtb.hpp"

namespace stsync {

void PatchDataset::validate() const {
    if (patches.empty()) return;
    Dims3 d = patches.front().dims;
    for (const auto& p : patches) {
        if (!(p.dims == d)) throw std::invalid_argument("PatchDataset: non-uniform patch dims");
        p.validate();
    }
    if (labels && labels->size() != patches.size())
        throw std::invalid_argument("PatchDataset: label count does not match patch count");
}

PatchDataset generate_translating_patches(const std::vector<Image2D>& source,
                                          std::size_t count, Dims3 dims,
                                          int max_shift, std::uint64_t seed,
                                          ShiftSet shift_set) {
    if (source.empty()) throw std::invalid_argument("generate_translating_patches: empty source list");
    if (count < 1) throw std::invalid_argument("generate_translating_patches: count must be >= 1");
    if (max_shift < 0) throw std::invalid_argument("generate_translating_patches: negative max_shift");

    const std::size_t margin = 2 * dims.t * static_cast<std::size_t>(max_shift);
    for (const auto& img : source) {
        if (img.rows < dims.h + margin || img.cols < dims.w + margin)
            throw std::invalid_argument(
                "generate_translating_patches: source image " + std::to_string(img.rows) + "x" +
                std::to_string(img.cols) + " smaller than required " +
                std::to_string(dims.h + margin) + "x" + std::to_string(dims.w + margin));
    }

    Rng rng(seed);
    PatchDataset ds;
    ds.seed = seed;
    ds.patches.reserve(count);
    ds.labels = std::vector<std::int64_t>();
    ds.labels->reserve(count);

    const long m = max_shift;
    const long span = dims.t > 0 ? static_cast<long>(dims.t) - 1 : 0;

    for (std::size_t i = 0; i < count; ++i) {
        const Image2D& img = source[rng.uniform_index(source.size())];

        long dx = 0, dy = 0;
        std::int64_t label = 0;
        if (shift_set == ShiftSet::FullGrid) {
            dx = rng.uniform_int(-m, m);
            dy = rng.uniform_int(-m, m);
            label = (dy + m) * (2 * m + 1) + (dx + m);
        } else {
            // 0 = up, 1 = down, 2 = left, 3 = right
            label = rng.uniform_int(0, 3);
            switch (label) {
            case 0: dy = -m; break;
            case 1: dy = m; break;
            case 2: dx = -m; break;
            case 3: dx = m; break;
            }
        }

        // window origin range such that origin + t*(dy,dx) stays inside for all t
        long r_lo = std::max<long>(0, -span * dy);
        long r_hi = static_cast<long>(img.rows - dims.h) - std::max<long>(0, span * dy);
        long c_lo = std::max<long>(0, -span * dx);
        long c_hi = static_cast<long>(img.cols - dims.w) - std::max<long>(0, span * dx);

        long r0 = rng.uniform_int(r_lo, r_hi);
        long c0 = rng.uniform_int(c_lo, c_hi);

        VideoBlock b(dims);
        for (std::size_t t = 0; t < dims.t; ++t) {
            long rt = r0 + static_cast<long>(t) * dy;
            long ct = c0 + static_cast<long>(t) * dx;
            for (std::size_t r = 0; r < dims.h; ++r)
                for (std::size_t c = 0; c < dims.w; ++c)
                    b.at(t, r, c) = img.at(static_cast<std::size_t>(rt) + r,
                                           static_cast<std::size_t>(ct) + c);
        }
        ds.patches.push_back(std::move(b));
        ds.labels->push_back(label);
    }
    return ds;
}

std::pair<Vec, Vec> generate_sinusoid_pair(std::size_t n, double freq, double phase, long shift) {
    if (n < 4) throw std::invalid_argument("generate_sinusoid_pair: n must be >= 4");
    if (!(freq > 0.0 && freq < 0.5))
        throw std::invalid_argument("generate_sinusoid_pair: freq must lie in (0, 0.5)");

    Vec x1(n), x2(n);
    for (std::size_t i = 0; i < n; ++i)
        x1[i] = std::sin(2.0 * M_PI * freq * static_cast<double>(i) + phase);

    long ln = static_cast<long>(n);
    long s = ((shift % ln) + ln) % ln;
    for (std::size_t i = 0; i < n; ++i)
        x2[i] = x1[static_cast<std::size_t>((static_cast<long>(i) - s + ln) % ln)];
    return {std::move(x1), std::move(x2)};
}

void contrast_normalize_inplace(double* v, std::size_t n, double epsilon) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += v[i];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) v[i] -= mean;
    double norm = std::sqrt(kernels::sum_sq(v, n));
    double denom = std::max(norm, epsilon);
    for (std::size_t i = 0; i < n; ++i) v[i] /= denom;
}

Vec contrast_normalize(const Vec& v, double epsilon) {
    Vec out = v;
    if (!out.empty()) contrast_normalize_inplace(out.data(), out.size(), epsilon);
    return out;
}

std::vector<Image2D> make_smooth_images(std::size_t count, std::size_t rows, std::size_t cols,
                                        std::uint64_t seed, int blur_passes) {
    Rng rng(seed);
    std::vector<Image2D> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Image2D img(rows, cols);
        for (auto& v : img.values) v = rng.normal();
        // separable 1-2-1 binomial blur with clamped borders
        Image2D tmp(rows, cols);
        for (int pass = 0; pass < blur_passes; ++pass) {
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) {
                    std::size_t cl = c > 0 ? c - 1 : 0;
                    std::size_t cr = c + 1 < cols ? c + 1 : cols - 1;
                    tmp.at(r, c) = 0.25 * img.at(r, cl) + 0.5 * img.at(r, c) + 0.25 * img.at(r, cr);
                }
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) {
                    std::size_t ru = r > 0 ? r - 1 : 0;
                    std::size_t rd = r + 1 < rows ? r + 1 : rows - 1;
                    img.at(r, c) = 0.25 * tmp.at(ru, c) + 0.5 * tmp.at(r, c) + 0.25 * tmp.at(rd, c);
                }
        }
        // standardize
        double mean = 0.0;
        for (double v : img.values) mean += v;
        mean /= static_cast<double>(img.values.size());
        double var = 0.0;
        for (double v : img.values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(img.values.size());
        double sd = std::sqrt(std::max(var, 1e-12));
        for (auto& v : img.values) v = (v - mean) / sd;
        out.push_back(std::move(img));
    }
    return out;
}

Vec flatten(const VideoBlock& b) {
    return b.values; // storage already frame-major row-major
}

void save_dataset(const std::filesystem::path& dir, const PatchDataset& ds) {
    ds.validate();
    if (ds.patches.empty()) throw std::invalid_argument("save_dataset: empty dataset");
    std::filesystem::create_directories(dir);

    Dims3 d = ds.dims();
    std::vector<double> all;
    all.reserve(ds.patches.size() * d.count());
    for (const auto& p : ds.patches) all.insert(all.end(), p.values.begin(), p.values.end());
    vtb::write(dir / "patches.vtb",
               vtb::Tensor::from_f64({ds.patches.size(), d.t, d.h, d.w}, all));

    if (ds.labels) {
        std::vector<double> lab(ds.labels->begin(), ds.labels->end());
        vtb::write(dir / "labels.vtb", vtb::Tensor::from_f64({lab.size()}, lab));
    }

    std::map<std::string, std::string> manifest = {
        {"format", "stsync-dataset"},
        {"seed", std::to_string(ds.seed)},
        {"count", std::to_string(ds.patches.size())},
        {"frames", std::to_string(d.t)},
        {"height", std::to_string(d.h)},
        {"width", std::to_string(d.w)},
        {"labeled", ds.labels ? "true" : "false"},
    };
    write_kv_file(dir / "manifest.txt", manifest);
}

PatchDataset load_dataset(const std::filesystem::path& dir) {
    auto manifest = read_kv_file(dir / "manifest.txt");
    if (manifest["format"] != "stsync-dataset")
        throw std::runtime_error("load_dataset: not a dataset directory: " + dir.string());

    vtb::Tensor t = vtb::read(dir / "patches.vtb");
    if (t.dims.size() != 4) throw std::runtime_error("load_dataset: patches.vtb must be 4-D");

    PatchDataset ds;
    ds.seed = std::stoull(manifest["seed"]);
    Dims3 d{static_cast<std::size_t>(t.dims[1]), static_cast<std::size_t>(t.dims[2]),
            static_cast<std::size_t>(t.dims[3])};
    std::size_t count = static_cast<std::size_t>(t.dims[0]);
    auto values = t.as_f64();
    ds.patches.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        VideoBlock b(d);
        std::copy(values.begin() + static_cast<long>(i * d.count()),
                  values.begin() + static_cast<long>((i + 1) * d.count()), b.values.begin());
        ds.patches.push_back(std::move(b));
    }
    if (manifest["labeled"] == "true") {
        auto lab = vtb::read(dir / "labels.vtb").as_f64();
        ds.labels = std::vector<std::int64_t>(lab.size());
        for (std::size_t i = 0; i < lab.size(); ++i) (*ds.labels)[i] = static_cast<std::int64_t>(lab[i]);
    }
    ds.validate();
    return ds;
}

} // namespace stsync
