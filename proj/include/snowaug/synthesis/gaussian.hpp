#pragma once

#include <cstddef>
#include <vector>

#include "snowaug/core/image.hpp"

namespace snowaug {

/// Discrete isotropic Gaussian, stored in separable 1-D form. The 2-D weight
/// at (dx, dy) is taps[dx] * taps[dy]; the 2-D weights sum to one.
class GaussianKernel {
public:
    GaussianKernel(double sigma, int radius, std::vector<double> taps)
        : sigma_(sigma), radius_(radius), taps_(std::move(taps)) {}

    double sigma() const noexcept { return sigma_; }
    int radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return taps_.size(); }
    const std::vector<double>& taps() const noexcept { return taps_; }

    double tap(int offset) const { return taps_[static_cast<std::size_t>(offset + radius_)]; }
    double weight(int dx, int dy) const { return tap(dx) * tap(dy); }

private:
    double sigma_;
    int radius_;
    std::vector<double> taps_;
};

/// Continuous isotropic 2-D Gaussian density.
double gaussian_density(double x, double y, double sigma) noexcept;

/// radius = ceil(3 sigma), weights proportional to the density at integer
/// offsets. Throws InvalidSigma for sigma <= 0 or non-finite.
GaussianKernel build_gaussian_kernel(double sigma);

/// Separable convolution, horizontal pass then vertical, with symmetric
/// (half-sample) reflection at the borders.
FloatField gaussian_filter(const FloatField& field, const GaussianKernel& kernel);

/// Maps any integer index into [0, n) by symmetric reflection
/// (... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...). Works for offsets wider than n.
inline std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) noexcept {
    const auto period = static_cast<std::ptrdiff_t>(2 * n);
    std::ptrdiff_t m = i % period;
    if (m < 0) m += period;
    return static_cast<std::size_t>(m < static_cast<std::ptrdiff_t>(n) ? m : period - 1 - m);
}

}  // namespace snowaug
