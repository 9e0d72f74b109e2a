#include "snowaug/synthesis/snow.hpp"

#include <string>

#include "snowaug/core/error.hpp"
#include "snowaug/synthesis/gaussian.hpp"
#include "snowaug/synthesis/motion_blur.hpp"
#include "snowaug/synthesis/noise.hpp"

namespace snowaug {

void blend_layer_inplace(FloatImage& image, const FloatField& layer) {
    if (layer.width() != image.width() || layer.height() != image.height()) {
        throw DimensionMismatch("layer is " + std::to_string(layer.width()) + "x" + std::to_string(layer.height()) +
                                ", image is " + std::to_string(image.width()) + "x" +
                                std::to_string(image.height()));
    }
    auto px = image.samples();
    const auto lv = layer.values();
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const double l = lv[i];
        if (l == 0.0) continue;
        double* p = px.data() + i * FloatImage::kChannels;
        for (std::size_t c = 0; c < FloatImage::kChannels; ++c) p[c] = p[c] * (1.0 - l) + l * 255.0;
    }
}

FloatImage blend_layer(const FloatImage& image, const FloatField& layer) {
    FloatImage out = image;
    blend_layer_inplace(out, layer);
    return out;
}

FloatField make_snow_layer(const SnowConfig& config, std::size_t k, Rng& rng) {
    const double angle = rng.uniform(config.angle_min, config.angle_max);
    const auto noise =
        sample_noise_field(config.working_width, config.working_height, config.noise_mean, config.noise_std, rng);
    const auto smooth = gaussian_filter(noise, build_gaussian_kernel(config.noise_sigma(k)));
    const auto particles = threshold_field(smooth, config.coverage_quantile);
    const auto kernel = build_motion_blur_kernel(config.blur_length(k), angle, config.smoothing_sigma(k));
    return apply_motion_blur(particles, kernel);
}

void add_snow_layers(FloatImage& working, const SnowConfig& config, Rng& rng) {
    config.validate();
    if (working.width() != config.working_width || working.height() != config.working_height) {
        throw DimensionMismatch("add_snow_layers: image is not at working size");
    }
    for (std::size_t k = 0; k < config.scale_array.size(); ++k) {
        blend_layer_inplace(working, make_snow_layer(config, k, rng));
    }
}

ImageBuffer synthesize_snow(const ImageBuffer& image, const SnowConfig& config, Rng& rng) {
    if (image.empty()) throw InvalidArgument("synthesize_snow: empty image");
    config.validate();
    FloatImage working = resize_bilinear(to_float(image), config.working_width, config.working_height);
    add_snow_layers(working, config, rng);
    return quantize(resize_bilinear(working, image.width(), image.height()));
}

ImageBuffer resize_round_trip(const ImageBuffer& image, const SnowConfig& config) {
    const FloatImage working = resize_bilinear(to_float(image), config.working_width, config.working_height);
    return quantize(resize_bilinear(working, image.width(), image.height()));
}

}  // namespace snowaug
