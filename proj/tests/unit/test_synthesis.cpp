#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "../support/oracles.hpp"
#include "../support/test_support.hpp"
#include "snowaug/core/error.hpp"
#include "snowaug/synthesis/gaussian.hpp"
#include "snowaug/synthesis/motion_blur.hpp"
#include "snowaug/synthesis/noise.hpp"
#include "snowaug/synthesis/snow.hpp"

using namespace snowaug;

namespace {

double max_abs_diff(const FloatField& a, const FloatField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

double sum_of(const FloatField& f) { return std::accumulate(f.values().begin(), f.values().end(), 0.0); }

}  // namespace

// ---- Gaussian kernel --------------------------------------------------------

TEST_CASE("continuous Gaussian density at the origin is 1/(2 pi sigma^2)") {
    CHECK(gaussian_density(0, 0, 1.0) == doctest::Approx(0.159155).epsilon(1e-6));
    CHECK(gaussian_density(0, 0, 1.0) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
}

TEST_CASE("Gaussian kernel shape") {
    const auto k = build_gaussian_kernel(1.0);
    CHECK(k.radius() == 3);
    CHECK(k.size() == 7);
    // Ratio of the discrete weights is the analytic exp(-1/2).
    CHECK(k.weight(1, 0) / k.weight(0, 0) == doctest::Approx(0.60653066).epsilon(1e-8));
    CHECK(std::abs(k.weight(1, 0) / k.weight(0, 0) - std::exp(-0.5)) < 1e-12);
    CHECK(build_gaussian_kernel(0.5).radius() == 2);
    CHECK(build_gaussian_kernel(2.2).radius() == 7);
}

TEST_CASE("Gaussian kernels are normalized and symmetric") {
    for (double sigma : {0.1, 0.5, 1.0, 1.7, 3.0, 4.0, 9.5}) {
        const auto k = build_gaussian_kernel(sigma);
        double sum2d = 0.0;
        for (int dy = -k.radius(); dy <= k.radius(); ++dy) {
            for (int dx = -k.radius(); dx <= k.radius(); ++dx) {
                sum2d += k.weight(dx, dy);
                REQUIRE(k.weight(dx, dy) == k.weight(-dx, -dy));
                REQUIRE(k.weight(dx, dy) == k.weight(dy, dx));
            }
        }
        CHECK(std::abs(sum2d - 1.0) < 1e-9);
    }
}

TEST_CASE("invalid sigma") {
    CHECK_THROWS_AS(build_gaussian_kernel(0.0), InvalidSigma);
    CHECK_THROWS_AS(build_gaussian_kernel(-1.0), InvalidSigma);
    CHECK_THROWS_AS(build_gaussian_kernel(std::nan("")), InvalidSigma);
    CHECK_THROWS_AS(build_gaussian_kernel(INFINITY), InvalidSigma);
}

// ---- Gaussian filter --------------------------------------------------------

TEST_CASE("gaussian_filter keeps constants") {
    const FloatField c(13, 9, 0.37);
    const auto out = gaussian_filter(c, build_gaussian_kernel(2.0));
    for (double v : out.values()) REQUIRE(std::abs(v - 0.37) < 1e-12);
}

TEST_CASE("gaussian_filter impulse response") {
    FloatField f(41, 41, 0.0);
    f(20, 20) = 1.0;
    const auto k = build_gaussian_kernel(1.0);
    const auto out = gaussian_filter(f, k);
    CHECK(out(20, 20) == doctest::Approx(k.weight(0, 0)).epsilon(1e-14));
    CHECK(out(21, 20) == doctest::Approx(k.weight(1, 0)).epsilon(1e-14));
    CHECK(std::abs(sum_of(out) - 1.0) < 1e-12);
}

TEST_CASE("separable filter equals direct 2-D convolution") {
    for (std::uint32_t seed = 0; seed < 5; ++seed) {
        for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
            const auto f = test::random_field(16, 16, seed);
            const auto fast = gaussian_filter(f, build_gaussian_kernel(sigma));
            const auto slow = oracle::gaussian_direct(f, sigma);
            REQUIRE(max_abs_diff(fast, slow) < 1e-9);
        }
    }
    // Non-square, narrower than the kernel.
    const auto f = test::random_field(5, 3, 77);
    CHECK(max_abs_diff(gaussian_filter(f, build_gaussian_kernel(3.0)), oracle::gaussian_direct(f, 3.0)) < 1e-9);
}

TEST_CASE("gaussian_filter preserves the mean of a periodic-friendly field") {
    // Mirror borders conserve mass exactly.
    const auto f = test::random_field(32, 24, 5);
    const auto out = gaussian_filter(f, build_gaussian_kernel(1.5));
    CHECK(std::abs(out.mean() - f.mean()) < 1e-6);
}

// ---- Noise and threshold ----------------------------------------------------

TEST_CASE("noise field statistics") {
    Rng rng(2024);
    const auto f = sample_noise_field(256, 256, 0.5, 0.3, rng);
    CHECK(std::abs(f.mean() - 0.5) <= 0.006);
    double var = 0.0;
    for (double v : f.values()) var += (v - f.mean()) * (v - f.mean());
    CHECK(std::sqrt(var / static_cast<double>(f.size())) == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("noise field determinism and preconditions") {
    Rng a(1), b(1);
    CHECK(sample_noise_field(20, 10, 0.5, 0.3, a) == sample_noise_field(20, 10, 0.5, 0.3, b));
    Rng c(1);
    CHECK_THROWS_AS(sample_noise_field(4, 4, 0.5, 0.0, c), InvalidArgument);
    CHECK_THROWS_AS(sample_noise_field(4, 4, 0.5, -1.0, c), InvalidArgument);
}

TEST_CASE("threshold coverage on a continuous field") {
    Rng rng(11);
    const auto f = sample_noise_field(1000, 1000, 0.0, 1.0, rng);
    const auto t = threshold_field(f, 0.05);
    const double frac = sum_of(t) / static_cast<double>(t.size());
    CHECK(frac >= 0.049);
    CHECK(frac <= 0.051);
    for (double v : t.values()) REQUIRE((v == 0.0 || v == 1.0));
}

TEST_CASE("threshold tie rules") {
    SUBCASE("constant field maps to all zeros") {
        const auto t = threshold_field(FloatField(10, 10, 0.42), 0.3);
        CHECK(sum_of(t) == 0.0);
    }
    SUBCASE("binary field at its own coverage is unchanged") {
        FloatField f(20, 10, 0.0);
        for (std::size_t i = 0; i < 20; ++i) f.values()[i * 10 + 3] = 1.0;  // 10% ones
        // Brute force: sort, pick the (n-k)-th smallest value as the threshold.
        std::vector<double> sorted(f.values().begin(), f.values().end());
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted[200 - 20 - 1] == 0.0);
        CHECK(threshold_field(f, 0.10) == f);
    }
    SUBCASE("vanishing coverage keeps nothing") {
        const auto f = test::random_field(30, 30, 3);
        CHECK(sum_of(threshold_field(f, 1e-9)) == 0.0);
    }
    CHECK_THROWS_AS(threshold_field(FloatField(2, 2), 0.0), InvalidArgument);
    CHECK_THROWS_AS(threshold_field(FloatField(2, 2), 1.0), InvalidArgument);
}

// ---- Motion blur kernel -----------------------------------------------------

TEST_CASE("horizontal motion kernel") {
    const auto k = build_motion_blur_kernel(5, 0.0, 0.0);
    REQUIRE(k.size == 5);
    for (std::size_t y = 0; y < 5; ++y) {
        for (std::size_t x = 0; x < 5; ++x) {
            CHECK(k.weights(x, y) == doctest::Approx(y == 2 ? 0.2 : 0.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("vertical motion kernel is the transpose") {
    for (double sigma : {0.0, 0.7}) {
        const auto h = build_motion_blur_kernel(7, 0.0, sigma);
        const auto v = build_motion_blur_kernel(7, 90.0, sigma);
        for (std::size_t y = 0; y < 7; ++y) {
            for (std::size_t x = 0; x < 7; ++x) REQUIRE(std::abs(v.weights(x, y) - h.weights(y, x)) < 1e-15);
        }
    }
}

TEST_CASE("even lengths round up to an odd side with half-weight ends") {
    const auto k = build_motion_blur_kernel(4, 0.0, 0.0);
    REQUIRE(k.size == 5);
    CHECK(k.weights(0, 2) == doctest::Approx(0.125));
    CHECK(k.weights(1, 2) == doctest::Approx(0.25));
    CHECK(k.weights(4, 2) == doctest::Approx(0.125));
}

TEST_CASE("motion kernels are non-negative and normalized") {
    std::mt19937 gen(8);
    std::uniform_int_distribution<int> len(1, 15);
    std::uniform_real_distribution<double> ang(-400.0, 400.0), sig(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const auto k = build_motion_blur_kernel(len(gen), ang(gen), i % 4 == 0 ? 0.0 : sig(gen));
        REQUIRE(k.size % 2 == 1);
        for (double v : k.weights.values()) REQUIRE(v >= 0.0);
        REQUIRE(std::abs(sum_of(k.weights) - 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(build_motion_blur_kernel(0, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("smaller scales are smoothed more") {
    // Peak weight falls as smoothing grows.
    const auto sharp = build_motion_blur_kernel(9, 30.0, 0.25);
    const auto soft = build_motion_blur_kernel(9, 30.0, 2.0);
    CHECK(*std::max_element(soft.weights.values().begin(), soft.weights.values().end()) <
          *std::max_element(sharp.weights.values().begin(), sharp.weights.values().end()));
}

// ---- Motion blur application ------------------------------------------------

TEST_CASE("apply_motion_blur basics") {
    const auto k = build_motion_blur_kernel(5, 0.0, 0.0);
    SUBCASE("zeros stay zero") {
        const auto out = apply_motion_blur(FloatField(12, 12, 0.0), k);
        CHECK(sum_of(out) == 0.0);
    }
    SUBCASE("impulse becomes a 5-pixel streak of 0.2") {
        FloatField f(15, 15, 0.0);
        f(7, 7) = 1.0;
        const auto out = apply_motion_blur(f, k);
        for (std::size_t y = 0; y < 15; ++y) {
            for (std::size_t x = 0; x < 15; ++x) {
                const bool on = y == 7 && x >= 5 && x <= 9;
                REQUIRE(out(x, y) == doctest::Approx(on ? 0.2 : 0.0).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("apply_motion_blur equals direct convolution on dense and sparse inputs") {
    for (std::uint32_t seed = 0; seed < 6; ++seed) {
        const auto k = build_motion_blur_kernel(3 + 2 * static_cast<int>(seed), 17.0 * seed, 0.3 * seed);
        // Dense input takes the gather path.
        const auto dense = test::random_field(16, 16, seed);
        REQUIRE(max_abs_diff(apply_motion_blur(dense, k), oracle::convolve_direct(dense, k.weights)) < 1e-9);
        // Sparse binary input takes the scatter path; particles near borders
        // exercise the mirrored copies.
        FloatField sparse(16, 16, 0.0);
        std::mt19937 gen(seed);
        for (int i = 0; i < 12; ++i) sparse(gen() % 16, gen() % 16) = 1.0;
        sparse(0, 0) = sparse(15, 15) = sparse(0, 15) = 1.0;
        REQUIRE(max_abs_diff(apply_motion_blur(sparse, k), oracle::convolve_direct(sparse, k.weights)) < 1e-9);
    }
    // Kernel wider than the field.
    const auto k = build_motion_blur_kernel(11, 45.0, 1.0);
    FloatField tiny(4, 3, 0.0);
    tiny(1, 1) = 1.0;
    CHECK(max_abs_diff(apply_motion_blur(tiny, k), oracle::convolve_direct(tiny, k.weights)) < 1e-9);
}

// ---- Blend ------------------------------------------------------------------

TEST_CASE("blend_layer") {
    FloatImage img(3, 1);
    img.at(0, 0, 0) = 100;
    img.at(1, 0, 1) = 40;
    img.at(2, 0, 2) = 250;
    SUBCASE("zero layer is identity") {
        const auto out = blend_layer(img, FloatField(3, 1, 0.0));
        for (std::size_t i = 0; i < 9; ++i) CHECK(out.samples()[i] == img.samples()[i]);
    }
    SUBCASE("full layer saturates") {
        FloatField l(3, 1, 0.0);
        l(1, 0) = 1.0;
        const auto out = blend_layer(img, l);
        for (std::size_t c = 0; c < 3; ++c) CHECK(out.at(1, 0, c) == 255.0);
    }
    SUBCASE("half layer") {
        FloatField l(3, 1, 0.5);
        const auto out = blend_layer(img, l);
        CHECK(out.at(0, 0, 0) == 177.5);
        CHECK(quantize_sample(out.at(0, 0, 0)) == 178);
    }
    CHECK_THROWS_AS(blend_layer(img, FloatField(2, 1)), DimensionMismatch);
}

// ---- Full synthesis ---------------------------------------------------------

namespace {

SnowConfig small_config() {
    SnowConfig c;
    c.working_width = 96;
    c.working_height = 54;
    return c;
}

}  // namespace

TEST_CASE("SnowConfig validation") {
    SnowConfig c;
    CHECK_NOTHROW(c.validate());
    c.scale_array = {1, 2, 3, 4};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.scale_array = {1, 2, 2, 3, 4};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SnowConfig{};
    c.noise_std = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SnowConfig{};
    c.coverage_quantile = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = SnowConfig{};
    CHECK(c.blur_length(0) == 4);
    CHECK(c.blur_length(4) == 11);
    CHECK(c.smoothing_sigma(0) == 2.0);
    CHECK(c.smoothing_sigma(4) == 0.25);
}

TEST_CASE("synthesize_snow keeps dimensions and is deterministic") {
    const auto img = test::make_test_image(120, 70, 4);
    const auto cfg = small_config();
    Rng a(9), b(9), c(10);
    const auto out_a = synthesize_snow(img, cfg, a);
    const auto out_b = synthesize_snow(img, cfg, b);
    const auto out_c = synthesize_snow(img, cfg, c);
    CHECK(out_a.width() == img.width());
    CHECK(out_a.height() == img.height());
    CHECK(encode_png(out_a) == encode_png(out_b));
    CHECK_FALSE(out_a == out_c);
}

TEST_CASE("no surviving particles leaves only the resize round trip") {
    const auto img = test::make_test_image(80, 50, 2);
    auto cfg = small_config();
    cfg.coverage_quantile = 1e-12;
    Rng rng(3);
    const auto out = synthesize_snow(img, cfg, rng);
    const auto rt = resize_round_trip(img, cfg);
    for (std::size_t i = 0; i < out.pixels().size(); ++i) {
        REQUIRE(std::abs(int(out.pixels()[i]) - int(rt.pixels()[i])) <= 1);
    }
}

TEST_CASE("snow only brightens") {
    for (std::uint32_t s = 0; s < 4; ++s) {
        const auto img = test::make_test_image(60 + 10 * s, 40 + 3 * s, s);
        auto cfg = small_config();
        cfg.coverage_quantile = 0.02 + 0.03 * s;
        Rng rng(s);
        const auto out = synthesize_snow(img, cfg, rng);
        const auto rt = resize_round_trip(img, cfg);
        double mean_out = 0, mean_rt = 0;
        for (std::size_t i = 0; i < out.pixels().size(); ++i) {
            REQUIRE(out.pixels()[i] >= rt.pixels()[i]);
            mean_out += out.pixels()[i];
            mean_rt += rt.pixels()[i];
        }
        CHECK(mean_out > mean_rt);
    }
}

TEST_CASE("working-size composite never darkens before quantization") {
    const auto cfg = small_config();
    const auto base = resize_bilinear(to_float(test::make_test_image(96, 54, 1)), 96, 54);
    FloatImage snowy = base;
    Rng rng(77);
    add_snow_layers(snowy, cfg, rng);
    for (std::size_t i = 0; i < base.samples().size(); ++i) REQUIRE(snowy.samples()[i] >= base.samples()[i]);
}

TEST_CASE("snow layers are valid opacity fields") {
    const auto cfg = small_config();
    Rng rng(5);
    for (std::size_t k = 0; k < 5; ++k) {
        const auto layer = make_snow_layer(cfg, k, rng);
        REQUIRE(layer.width() == 96);
        for (double v : layer.values()) REQUIRE((v >= 0.0 && v <= 1.0));
        REQUIRE(sum_of(layer) > 0.0);
    }
}
