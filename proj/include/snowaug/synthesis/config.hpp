#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace snowaug {

/// All knobs of the snow synthesizer. Defaults are tuned for 1280x720
/// driving imagery processed at half resolution.
struct SnowConfig {
    std::size_t working_width = 640;
    std::size_t working_height = 360;
    /// One synthesis pass per entry; exactly five, positive, strictly increasing.
    std::vector<double> scale_array{0.5, 1.0, 2.0, 3.0, 4.0};
    double noise_mean = 0.5;
    double noise_std = 0.3;
    /// Fraction of pixels that become particles at each scale.
    double coverage_quantile = 0.04;
    /// Gaussian sigma for the noise field is scale * base_sigma.
    double base_sigma = 1.0;
    /// Motion kernel smoothing sigma is smoothing_constant / scale.
    double smoothing_constant = 1.0;
    /// Per-scale streak length in pixels. Empty means round(3 + 2 * scale).
    std::vector<int> blur_lengths;
    double angle_min = 0.0;
    double angle_max = 180.0;
    std::uint64_t seed = 0;

    static constexpr std::size_t kScaleCount = 5;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;

    int blur_length(std::size_t k) const;
    double noise_sigma(std::size_t k) const { return scale_array[k] * base_sigma; }
    double smoothing_sigma(std::size_t k) const { return smoothing_constant / scale_array[k]; }

    /// Stable textual form used for digests. Excludes the seed.
    std::string canonical() const;
};

}  // namespace snowaug
