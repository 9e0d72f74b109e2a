#include "snowaug/synthesis/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snowaug/core/error.hpp"

namespace snowaug {

double gaussian_density(double x, double y, double sigma) noexcept {
    const double s2 = sigma * sigma;
    return std::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

GaussianKernel build_gaussian_kernel(double sigma) {
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw InvalidSigma("gaussian sigma must be positive and finite, got " + std::to_string(sigma));
    }
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    // The 2-D weight is an outer product, so normalizing the 1-D taps to one
    // normalizes the 2-D kernel too.
    for (double& t : taps) t /= sum;
    return GaussianKernel(sigma, radius, std::move(taps));
}

namespace {

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define SNOWAUG_VECTOR_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define SNOWAUG_VECTOR_CLONES
#endif

// dst[x] = wt * src[x]. Each element is computed independently, so the
// wider clone gives bit-identical results.
SNOWAUG_VECTOR_CLONES void scale_row(double* __restrict dst, const double* __restrict src, double wt, std::size_t n) {
    for (std::size_t x = 0; x < n; ++x) dst[x] = wt * src[x];
}

// dst[x] += wt * (a[x] + b[x])
SNOWAUG_VECTOR_CLONES void add_pair_row(double* __restrict dst, const double* a, const double* b, double wt,
                                        std::size_t n) {
    for (std::size_t x = 0; x < n; ++x) dst[x] += wt * (a[x] + b[x]);
}

}  // namespace

FloatField gaussian_filter(const FloatField& field, const GaussianKernel& kernel) {
    if (field.empty()) throw InvalidArgument("gaussian_filter: empty field");
    const std::size_t w = field.width();
    const std::size_t h = field.height();
    const int r = kernel.radius();
    const auto& taps = kernel.taps();
    const std::size_t ntaps = taps.size();
    const auto ur = static_cast<std::size_t>(r);

    FloatField tmp(w, h);
    std::vector<double> padded(w + 2 * static_cast<std::size_t>(r));
    for (std::size_t y = 0; y < h; ++y) {
        const auto src = field.row(y);
        std::copy(src.begin(), src.end(), padded.begin() + r);
        for (std::size_t i = 0; i < ur; ++i) {
            padded[i] = src[reflect_index(static_cast<std::ptrdiff_t>(i) - r, w)];
            padded[ur + w + i] = src[reflect_index(static_cast<std::ptrdiff_t>(w + i), w)];
        }
        // Taps are symmetric, so mirrored pairs share one multiply.
        double* dst = tmp.row(y).data();
        const double* mid = padded.data() + r;
        scale_row(dst, mid, taps[ur], w);
        for (std::size_t t = 0; t < ur; ++t) {
            add_pair_row(dst, padded.data() + t, padded.data() + (ntaps - 1 - t), taps[t], w);
        }
    }

    // Vertical pass in column blocks so the accumulators stay in L1.
    constexpr std::size_t kBlock = 128;
    FloatField out(w, h);
    std::vector<const double*> rows(ntaps);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t t = 0; t < ntaps; ++t) {
            rows[t] = tmp.row(reflect_index(static_cast<std::ptrdiff_t>(y + t) - r, h)).data();
        }
        double* dst = out.row(y).data();
        for (std::size_t x0 = 0; x0 < w; x0 += kBlock) {
            const std::size_t n = std::min(kBlock, w - x0);
            double acc[kBlock];
            scale_row(acc, rows[ur] + x0, taps[ur], n);
            for (std::size_t t = 0; t < ur; ++t) add_pair_row(acc, rows[t] + x0, rows[ntaps - 1 - t] + x0, taps[t], n);
            std::copy_n(acc, n, dst + x0);
        }
    }
    return out;
}

}  // namespace snowaug
