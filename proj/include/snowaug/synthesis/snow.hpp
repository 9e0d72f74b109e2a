#pragma once

#include "snowaug/core/image.hpp"
#include "snowaug/core/seed.hpp"
#include "snowaug/synthesis/config.hpp"

namespace snowaug {

/// out = in * (1 - layer) + 255 * layer, per pixel and channel, in floating
/// point. Throws DimensionMismatch when the layer does not cover the image.
void blend_layer_inplace(FloatImage& image, const FloatField& layer);
FloatImage blend_layer(const FloatImage& image, const FloatField& layer);

/// Builds one particle layer for scale index k, drawing from rng (angle
/// first, then the noise field).
FloatField make_snow_layer(const SnowConfig& config, std::size_t k, Rng& rng);

/// Composites all scales onto an image that is already at working size.
void add_snow_layers(FloatImage& working, const SnowConfig& config, Rng& rng);

/// Resize to working size, composite every scale, resize back, quantize once.
ImageBuffer synthesize_snow(const ImageBuffer& image, const SnowConfig& config, Rng& rng);

/// The same resize chain with no snow added; the baseline synthesize_snow
/// output is compared against.
ImageBuffer resize_round_trip(const ImageBuffer& image, const SnowConfig& config);

}  // namespace snowaug
