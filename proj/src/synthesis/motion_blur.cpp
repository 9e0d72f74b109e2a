#include "snowaug/synthesis/motion_blur.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "snowaug/core/error.hpp"
#include "snowaug/synthesis/gaussian.hpp"

namespace snowaug {

namespace {

// Exact values at multiples of 90 degrees so axis-aligned kernels carry no
// 1e-17 leakage into neighbouring rows.
void exact_cos_sin(double degrees, double& c, double& s) {
    double r = std::fmod(degrees, 360.0);
    if (r < 0.0) r += 360.0;
    if (r == 0.0) { c = 1.0; s = 0.0; return; }
    if (r == 90.0) { c = 0.0; s = 1.0; return; }
    if (r == 180.0) { c = -1.0; s = 0.0; return; }
    if (r == 270.0) { c = 0.0; s = -1.0; return; }
    const double rad = r * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
}

double sample_bilinear_zero(const FloatField& f, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const double ax = x - fx;
    const double ay = y - fy;
    const auto ix = static_cast<long>(fx);
    const auto iy = static_cast<long>(fy);
    const auto w = static_cast<long>(f.width());
    const auto h = static_cast<long>(f.height());
    auto at = [&](long cx, long cy) -> double {
        if (cx < 0 || cy < 0 || cx >= w || cy >= h) return 0.0;
        return f(static_cast<std::size_t>(cx), static_cast<std::size_t>(cy));
    };
    return (1 - ax) * (1 - ay) * at(ix, iy) + ax * (1 - ay) * at(ix + 1, iy) + (1 - ax) * ay * at(ix, iy + 1) +
           ax * ay * at(ix + 1, iy + 1);
}

FloatField smooth_zero_padded(const FloatField& f, double sigma) {
    const auto g = build_gaussian_kernel(sigma);
    const int r = g.radius();
    const auto n = static_cast<long>(f.width());
    FloatField tmp(f.width(), f.height());
    for (long y = 0; y < n; ++y) {
        for (long x = 0; x < n; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                const long sx = x + t;
                if (sx >= 0 && sx < n) acc += g.tap(t) * f(static_cast<std::size_t>(sx), static_cast<std::size_t>(y));
            }
            tmp(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
        }
    }
    FloatField out(f.width(), f.height());
    for (long y = 0; y < n; ++y) {
        for (long x = 0; x < n; ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                const long sy = y + t;
                if (sy >= 0 && sy < n) acc += g.tap(t) * tmp(static_cast<std::size_t>(x), static_cast<std::size_t>(sy));
            }
            out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
        }
    }
    return out;
}

}  // namespace

MotionBlurKernel build_motion_blur_kernel(int length, double angle, double smoothing_sigma) {
    if (length < 1) throw InvalidArgument("motion blur length must be >= 1");
    if (!std::isfinite(angle)) throw InvalidArgument("motion blur angle must be finite");
    if (!std::isfinite(smoothing_sigma) || smoothing_sigma < 0.0) {
        throw InvalidArgument("motion blur smoothing sigma must be >= 0");
    }

    const std::size_t size = static_cast<std::size_t>(length % 2 == 1 ? length : length + 1);
    const double center = static_cast<double>(size / 2);
    const double half_len = static_cast<double>(length) / 2.0;

    // Horizontal segment [-L/2, L/2] rasterized by exact cell overlap.
    FloatField line(size, size);
    for (std::size_t x = 0; x < size; ++x) {
        const double d = static_cast<double>(x) - center;
        const double overlap = std::min(d + 0.5, half_len) - std::max(d - 0.5, -half_len);
        line(x, size / 2) = std::clamp(overlap, 0.0, 1.0);
    }

    double c = 1.0, s = 0.0;
    exact_cos_sin(angle, c, s);
    FloatField rotated(size, size);
    for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
            const double dx = static_cast<double>(x) - center;
            const double dy = static_cast<double>(y) - center;
            const double sx = c * dx + s * dy;
            const double sy = -s * dx + c * dy;
            rotated(x, y) = sample_bilinear_zero(line, center + sx, center + sy);
        }
    }

    if (smoothing_sigma > 0.0) rotated = smooth_zero_padded(rotated, smoothing_sigma);

    auto vals = rotated.values();
    const double sum = std::accumulate(vals.begin(), vals.end(), 0.0);
    if (!(sum > 0.0)) throw InvalidArgument("motion blur kernel has no mass");
    for (double& v : vals) v /= sum;

    return MotionBlurKernel{size, angle, std::move(rotated)};
}

FloatField apply_motion_blur(const FloatField& field, const MotionBlurKernel& kernel) {
    if (field.empty()) throw InvalidArgument("apply_motion_blur: empty field");
    const std::size_t w = field.width();
    const std::size_t h = field.height();
    const std::size_t ks = kernel.size;
    const auto r = static_cast<std::ptrdiff_t>(kernel.radius());
    const std::size_t pw = w + 2 * static_cast<std::size_t>(r);
    const std::size_t ph = h + 2 * static_cast<std::size_t>(r);

    std::vector<std::size_t> col_src(pw);
    for (std::size_t i = 0; i < pw; ++i) col_src[i] = reflect_index(static_cast<std::ptrdiff_t>(i) - r, w);

    const auto vals = field.values();
    const auto nonzero = static_cast<std::size_t>(std::count_if(vals.begin(), vals.end(), [](double v) { return v != 0.0; }));

    FloatField out(w, h);
    // out(y, x) = sum_{i,j} K(i, j) * P(y + 2r - i, x + 2r - j), where P is
    // the field reflect-padded by r on every side.
    if (nonzero * 4 < vals.size()) {
        // Scatter each nonzero padded sample into the outputs it reaches,
        // visiting only the nonzero span of each kernel row.
        std::vector<std::pair<std::size_t, std::size_t>> spans(ks, {0, 0});
        for (std::size_t i = 0; i < ks; ++i) {
            const auto krow = kernel.weights.row(i);
            const auto first = std::find_if(krow.begin(), krow.end(), [](double k) { return k != 0.0; });
            if (first == krow.end()) continue;
            const auto last = std::find_if(krow.rbegin(), krow.rend(), [](double k) { return k != 0.0; });
            spans[i] = {static_cast<std::size_t>(first - krow.begin()), static_cast<std::size_t>(krow.rend() - last)};
        }
        for (std::size_t py = 0; py < ph; ++py) {
            const auto src = field.row(reflect_index(static_cast<std::ptrdiff_t>(py) - r, h));
            for (std::size_t px = 0; px < pw; ++px) {
                const double v = src[col_src[px]];
                if (v == 0.0) continue;
                // Output (y, x) = (py - r + i, px - r + j).
                for (std::size_t i = 0; i < ks; ++i) {
                    const auto y = static_cast<std::ptrdiff_t>(py + i) - 2 * r;
                    if (y < 0 || y >= static_cast<std::ptrdiff_t>(h) || spans[i].first == spans[i].second) continue;
                    const auto krow = kernel.weights.row(i);
                    auto orow = out.row(static_cast<std::size_t>(y));
                    const auto x0 = static_cast<std::ptrdiff_t>(px) - 2 * r;
                    const auto j_begin = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(spans[i].first), -x0);
                    const auto j_end_signed = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(spans[i].second),
                                                                       static_cast<std::ptrdiff_t>(w) - x0);
                    for (std::ptrdiff_t j = j_begin; j < j_end_signed; ++j) {
                        orow[static_cast<std::size_t>(x0 + j)] += krow[static_cast<std::size_t>(j)] * v;
                    }
                }
            }
        }
    } else {
        std::vector<double> padded(pw * ph);
        for (std::size_t py = 0; py < ph; ++py) {
            const auto src = field.row(reflect_index(static_cast<std::ptrdiff_t>(py) - r, h));
            for (std::size_t px = 0; px < pw; ++px) padded[py * pw + px] = src[col_src[px]];
        }
        const auto two_r = static_cast<std::size_t>(2 * r);
        for (std::size_t y = 0; y < h; ++y) {
            auto orow = out.row(y);
            for (std::size_t i = 0; i < ks; ++i) {
                const double* prow = padded.data() + (y + two_r - i) * pw;
                const auto krow = kernel.weights.row(i);
                for (std::size_t j = 0; j < ks; ++j) {
                    const double k = krow[j];
                    if (k == 0.0) continue;
                    const double* p = prow + two_r - j;
                    for (std::size_t x = 0; x < w; ++x) orow[x] += k * p[x];
                }
            }
        }
    }

    for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
    return out;
}

}  // namespace snowaug
