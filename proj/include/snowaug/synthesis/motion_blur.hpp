#pragma once

#include <cstddef>

#include "snowaug/core/image.hpp"

namespace snowaug {

/// Square, odd-sized, normalized streak kernel.
struct MotionBlurKernel {
    std::size_t size = 1;
    double angle = 0.0;
    FloatField weights;

    int radius() const noexcept { return static_cast<int>(size / 2); }
};

/// Horizontal line of the given length centred in a size x size array
/// (size = length rounded up to odd; an even length puts half-weight cells at
/// both ends), rotated by `angle` degrees with bilinear sampling and zero fill,
/// smoothed by a zero-padded Gaussian of `smoothing_sigma` (0 skips it), and
/// renormalized. The streak direction is (cos a, sin a) in (column, row) axes.
MotionBlurKernel build_motion_blur_kernel(int length, double angle, double smoothing_sigma);

/// Full 2-D convolution with symmetric reflection at the borders; the result
/// is clamped to [0, 1]. Sparse inputs go through a scatter path.
FloatField apply_motion_blur(const FloatField& field, const MotionBlurKernel& kernel);

}  // namespace snowaug
