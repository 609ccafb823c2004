#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stsync/kernels.hpp"
#include "stsync/rng.hpp"

using namespace stsync;
namespace k = stsync::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.normal();
    return v;
}

// sizes straddling vector widths and remainders
const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1000, 1023};

struct ScalarGuard {
    k::Backend saved;
    ScalarGuard() : saved(k::active_backend()) {}
    ~ScalarGuard() { k::set_backend(saved); }
};

} // namespace

TEST_CASE("scalar backend is always available") {
    CHECK(k::backend_available(k::Backend::Scalar));
    CHECK_NOTHROW(k::set_backend(k::Backend::Scalar));
}

TEST_CASE("vectorized backends match scalar") {
    ScalarGuard guard;
    for (k::Backend b : {k::Backend::Avx2, k::Backend::Neon}) {
        if (!k::backend_available(b)) continue;
        INFO("backend ", k::backend_name(b));
        Rng rng(7);
        for (std::size_t n : kSizes) {
            auto a = random_vec(rng, n), v = random_vec(rng, n);
            auto pos_a = a, pos_b = v;
            for (auto& x : pos_a) x = std::abs(x);
            for (auto& x : pos_b) x = std::abs(x);

            k::set_backend(k::Backend::Scalar);
            double dot_s = k::dot(a.data(), v.data(), n);
            double ss_s = k::sum_sq(a.data(), n);
            double sd_s = k::squared_distance(a.data(), v.data(), n);
            double chi_s = k::chi2(pos_a.data(), pos_b.data(), n, 1e-10);
            auto y_s = v;
            k::axpy(0.37, a.data(), y_s.data(), n);
            auto z_s = v;
            k::axpby(0.37, a.data(), -1.21, z_s.data(), n);

            k::set_backend(b);
            double dot_v = k::dot(a.data(), v.data(), n);
            double ss_v = k::sum_sq(a.data(), n);
            double sd_v = k::squared_distance(a.data(), v.data(), n);
            double chi_v = k::chi2(pos_a.data(), pos_b.data(), n, 1e-10);
            auto y_v = v;
            k::axpy(0.37, a.data(), y_v.data(), n);
            auto z_v = v;
            k::axpby(0.37, a.data(), -1.21, z_v.data(), n);

            double scale = std::sqrt(ss_s) + 1.0;
            CHECK(dot_v == doctest::Approx(dot_s).epsilon(1e-12).scale(scale));
            CHECK(ss_v == doctest::Approx(ss_s).epsilon(1e-12));
            CHECK(sd_v == doctest::Approx(sd_s).epsilon(1e-12));
            CHECK(chi_v == doctest::Approx(chi_s).epsilon(1e-12));
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(y_v[i] == doctest::Approx(y_s[i]).epsilon(1e-14));
                CHECK(z_v[i] == doctest::Approx(z_s[i]).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("matvec matches per-row dot on every backend") {
    ScalarGuard guard;
    Rng rng(11);
    const std::size_t rows = 13, n = 37;
    auto w = random_vec(rng, rows * n);
    auto x = random_vec(rng, n);
    for (k::Backend b : {k::Backend::Scalar, k::Backend::Avx2, k::Backend::Neon}) {
        if (!k::backend_available(b)) continue;
        k::set_backend(b);
        std::vector<double> out(rows);
        k::matvec(w.data(), x.data(), out.data(), rows, n);
        for (std::size_t r = 0; r < rows; ++r)
            CHECK(out[r] == doctest::Approx(k::dot(w.data() + r * n, x.data(), n)).epsilon(1e-13));
    }
}

TEST_CASE("kernel identities") {
    Rng rng(3);
    auto a = random_vec(rng, 33), b = random_vec(rng, 33);
    CHECK(k::dot(a.data(), b.data(), 33) == doctest::Approx(k::dot(b.data(), a.data(), 33)));
    CHECK(k::sum_sq(a.data(), 33) == doctest::Approx(k::dot(a.data(), a.data(), 33)));
    CHECK(k::squared_distance(a.data(), a.data(), 33) == 0.0);
    CHECK(k::chi2(a.data(), a.data(), 33, 1e-10) == 0.0);

    auto pa = a, pb = b;
    for (auto& x : pa) x = std::abs(x);
    for (auto& x : pb) x = std::abs(x);
    CHECK(k::chi2(pa.data(), pb.data(), 33, 1e-10) >= 0.0);
    CHECK(k::chi2(pa.data(), pb.data(), 33, 1e-10) ==
          doctest::Approx(k::chi2(pb.data(), pa.data(), 33, 1e-10)));
}

TEST_CASE("unavailable backend is rejected") {
#if defined(__x86_64__) || defined(_M_X64)
    CHECK(!k::backend_available(k::Backend::Neon));
    CHECK_THROWS(k::set_backend(k::Backend::Neon));
#else
    CHECK(!k::backend_available(k::Backend::Avx2));
    CHECK_THROWS(k::set_backend(k::Backend::Avx2));
#endif
}
