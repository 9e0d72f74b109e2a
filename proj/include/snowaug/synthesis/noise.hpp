#pragma once

#include <cstddef>

#include "snowaug/core/image.hpp"
#include "snowaug/core/seed.hpp"

namespace snowaug {

/// i.i.d. normal samples, row-major, drawn from `rng`.
FloatField sample_noise_field(std::size_t width, std::size_t height, double mean, double stddev, Rng& rng);

/// Threshold at the empirical (1 - coverage) quantile: with n samples and
/// k = round(coverage * n) clamped to [0, n-1], the threshold is the
/// (n-k)-th smallest value and only samples strictly above it become 1.
/// A constant field therefore maps to all zeros.
FloatField threshold_field(const FloatField& field, double coverage_quantile);

}  // namespace snowaug
