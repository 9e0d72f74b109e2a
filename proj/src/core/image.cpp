#include "snowaug/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "snowaug/core/error.hpp"

namespace snowaug {

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), data_(width * height * kChannels, fill) {}

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_ * kChannels) {
        throw DimensionMismatch("image data holds " + std::to_string(data_.size()) + " samples, expected " +
                                std::to_string(width_ * height_ * kChannels));
    }
}

FloatField::FloatField(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

FloatField::FloatField(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
        throw DimensionMismatch("field data holds " + std::to_string(data_.size()) + " samples, expected " +
                                std::to_string(width_ * height_));
    }
}

double FloatField::mean() const noexcept {
    if (data_.empty()) return 0.0;
    return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

FloatImage::FloatImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height * kChannels, fill) {}

FloatImage to_float(const ImageBuffer& image) {
    FloatImage out(image.width(), image.height());
    auto src = image.pixels();
    auto dst = out.samples();
    std::transform(src.begin(), src.end(), dst.begin(), [](std::uint8_t v) { return static_cast<double>(v); });
    return out;
}

std::uint8_t quantize_sample(double value) noexcept {
    const double r = std::floor(value + 0.5);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

ImageBuffer quantize(const FloatImage& image) {
    ImageBuffer out(image.width(), image.height());
    auto src = image.samples();
    auto dst = out.pixels();
    std::transform(src.begin(), src.end(), dst.begin(), quantize_sample);
    return out;
}

namespace {

struct Tap {
    std::size_t i0;
    std::size_t i1;
    double w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<Tap> bilinear_taps(std::size_t src, std::size_t dst) {
    std::vector<Tap> taps(dst);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    const double max_pos = static_cast<double>(src - 1);
    for (std::size_t i = 0; i < dst; ++i) {
        double pos = (static_cast<double>(i) + 0.5) * scale - 0.5;
        pos = std::clamp(pos, 0.0, max_pos);
        const auto i0 = static_cast<std::size_t>(pos);
        const std::size_t i1 = std::min(i0 + 1, src - 1);
        taps[i] = {i0, i1, pos - static_cast<double>(i0)};
    }
    return taps;
}

}  // namespace

FloatImage resize_bilinear(const FloatImage& image, std::size_t width, std::size_t height) {
    if (image.empty() || width == 0 || height == 0) {
        throw InvalidArgument("resize_bilinear: empty source or zero target size");
    }
    if (width == image.width() && height == image.height()) return image;

    constexpr std::size_t C = FloatImage::kChannels;
    const auto xs = bilinear_taps(image.width(), width);
    const auto ys = bilinear_taps(image.height(), height);

    // Horizontal pass into a (width x src_height) buffer, then vertical.
    FloatImage tmp(width, image.height());
    const auto src = image.samples();
    auto mid = tmp.samples();
    for (std::size_t y = 0; y < image.height(); ++y) {
        const double* row = src.data() + y * image.width() * C;
        double* out = mid.data() + y * width * C;
        for (std::size_t x = 0; x < width; ++x) {
            const Tap& t = xs[x];
            for (std::size_t c = 0; c < C; ++c) {
                const double a = row[t.i0 * C + c];
                const double b = row[t.i1 * C + c];
                out[x * C + c] = a + (b - a) * t.w1;
            }
        }
    }

    FloatImage out(width, height);
    auto dst = out.samples();
    const std::size_t stride = width * C;
    for (std::size_t y = 0; y < height; ++y) {
        const Tap& t = ys[y];
        const double* r0 = mid.data() + t.i0 * stride;
        const double* r1 = mid.data() + t.i1 * stride;
        double* o = dst.data() + y * stride;
        for (std::size_t k = 0; k < stride; ++k) {
            o[k] = r0[k] + (r1[k] - r0[k]) * t.w1;
        }
    }
    return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& image, std::size_t width, std::size_t height) {
    if (width == image.width() && height == image.height() && !image.empty()) return image;
    return quantize(resize_bilinear(to_float(image), width, height));
}

}  // namespace snowaug
