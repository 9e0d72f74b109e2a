#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace snowaug {

/// Owned 8-bit RGB raster, row-major, interleaved.
class ImageBuffer {
public:
    static constexpr std::size_t kChannels = 3;

    ImageBuffer() = default;
    ImageBuffer(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    /// Throws DimensionMismatch unless data.size() == width * height * 3.
    ImageBuffer(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::span<std::uint8_t> pixels() noexcept { return data_; }

    std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
        return data_[(y * width_ + x) * kChannels + c];
    }
    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) {
        return data_[(y * width_ + x) * kChannels + c];
    }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Single-channel real-valued field (noise arrays, snow layers, kernels).
class FloatField {
public:
    FloatField() = default;
    FloatField(std::size_t width, std::size_t height, double fill = 0.0);
    FloatField(std::size_t width, std::size_t height, std::vector<double> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    double operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }
    double& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }

    std::span<const double> row(std::size_t y) const {
        return std::span<const double>(data_).subspan(y * width_, width_);
    }
    std::span<double> row(std::size_t y) { return std::span<double>(data_).subspan(y * width_, width_); }

    double mean() const noexcept;

    friend bool operator==(const FloatField&, const FloatField&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

/// Interleaved RGB raster in floating point, on the 0..255 scale. The
/// synthesis chain runs in this type and quantizes once at the end.
class FloatImage {
public:
    static constexpr std::size_t kChannels = 3;

    FloatImage() = default;
    FloatImage(std::size_t width, std::size_t height, double fill = 0.0);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const double> samples() const noexcept { return data_; }
    std::span<double> samples() noexcept { return data_; }

    double at(std::size_t x, std::size_t y, std::size_t c) const {
        return data_[(y * width_ + x) * kChannels + c];
    }
    double& at(std::size_t x, std::size_t y, std::size_t c) {
        return data_[(y * width_ + x) * kChannels + c];
    }

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

FloatImage to_float(const ImageBuffer& image);

/// Round-half-up to the nearest integer, clamped to [0, 255].
std::uint8_t quantize_sample(double value) noexcept;
ImageBuffer quantize(const FloatImage& image);

/// Bilinear resampling with pixel-center alignment; identity when the size
/// is unchanged.
FloatImage resize_bilinear(const FloatImage& image, std::size_t width, std::size_t height);
ImageBuffer resize_bilinear(const ImageBuffer& image, std::size_t width, std::size_t height);

}  // namespace snowaug
