#include "snowaug/synthesis/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "snowaug/core/error.hpp"

namespace snowaug {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void SnowConfig::validate() const {
    if (working_width == 0 || working_height == 0) {
        throw ConfigError("snow.working_width and snow.working_height must be positive");
    }
    if (scale_array.size() != kScaleCount) {
        throw ConfigError("snow.scale_array must have exactly 5 entries, got " + std::to_string(scale_array.size()));
    }
    for (std::size_t k = 0; k < scale_array.size(); ++k) {
        if (!std::isfinite(scale_array[k]) || scale_array[k] <= 0.0) {
            throw ConfigError("snow.scale_array entries must be positive");
        }
        if (k > 0 && !(scale_array[k] > scale_array[k - 1])) {
            throw ConfigError("snow.scale_array must be strictly increasing");
        }
    }
    if (!std::isfinite(noise_mean)) throw ConfigError("snow.noise_mean must be finite");
    if (!std::isfinite(noise_std) || noise_std <= 0.0) throw ConfigError("snow.noise_std must be > 0");
    if (!(coverage_quantile > 0.0 && coverage_quantile < 1.0)) {
        throw ConfigError("snow.coverage_quantile must lie in (0, 1)");
    }
    if (!std::isfinite(base_sigma) || base_sigma <= 0.0) throw ConfigError("snow.base_sigma must be > 0");
    if (!std::isfinite(smoothing_constant) || smoothing_constant < 0.0) {
        throw ConfigError("snow.smoothing_constant must be >= 0");
    }
    if (!blur_lengths.empty()) {
        if (blur_lengths.size() != kScaleCount) throw ConfigError("snow.blur_lengths must have 5 entries");
        for (int len : blur_lengths) {
            if (len < 1) throw ConfigError("snow.blur_lengths entries must be >= 1");
        }
    }
    if (!std::isfinite(angle_min) || !std::isfinite(angle_max) || !(angle_min < angle_max)) {
        throw ConfigError("snow.angle_min must be below snow.angle_max");
    }
}

int SnowConfig::blur_length(std::size_t k) const {
    if (!blur_lengths.empty()) return blur_lengths[k];
    return static_cast<int>(std::lround(3.0 + 2.0 * scale_array[k]));
}

std::string SnowConfig::canonical() const {
    std::ostringstream out;
    out << "snow.angle_max=" << fmt_double(angle_max) << '\n';
    out << "snow.angle_min=" << fmt_double(angle_min) << '\n';
    out << "snow.base_sigma=" << fmt_double(base_sigma) << '\n';
    out << "snow.blur_lengths=[";
    for (std::size_t k = 0; k < kScaleCount && k < scale_array.size(); ++k) {
        out << (k ? "," : "") << blur_length(k);
    }
    out << "]\n";
    out << "snow.coverage_quantile=" << fmt_double(coverage_quantile) << '\n';
    out << "snow.noise_mean=" << fmt_double(noise_mean) << '\n';
    out << "snow.noise_std=" << fmt_double(noise_std) << '\n';
    out << "snow.scale_array=[";
    for (std::size_t k = 0; k < scale_array.size(); ++k) out << (k ? "," : "") << fmt_double(scale_array[k]);
    out << "]\n";
    out << "snow.smoothing_constant=" << fmt_double(smoothing_constant) << '\n';
    out << "snow.working_height=" << working_height << '\n';
    out << "snow.working_width=" << working_width << '\n';
    return out.str();
}

}  // namespace snowaug
