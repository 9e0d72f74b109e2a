#include "snowaug/synthesis/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "snowaug/core/error.hpp"

namespace snowaug {

namespace {

/// Value of rank `rank` (0-based, ascending). Buckets the range first so the
/// exact selection only runs over the bucket that holds the answer.
double order_statistic(std::span<const double> vals, std::size_t rank) {
    const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) return lo;

    constexpr std::size_t kBuckets = 4096;
    const double scale = static_cast<double>(kBuckets) / (hi - lo);
    // Monotone in v, so bucket order agrees with value order.
    auto bucket = [&](double v) {
        return std::min(kBuckets - 1, static_cast<std::size_t>((v - lo) * scale));
    };
    std::vector<std::uint16_t> ids(vals.size());
    std::vector<std::size_t> counts(kBuckets, 0);
    for (std::size_t i = 0; i < vals.size(); ++i) ++counts[ids[i] = static_cast<std::uint16_t>(bucket(vals[i]))];

    std::size_t b = 0, below = 0;
    while (below + counts[b] <= rank) below += counts[b++];

    std::vector<double> members;
    members.reserve(counts[b]);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (ids[i] == b) members.push_back(vals[i]);
    }
    const auto nth = members.begin() + static_cast<std::ptrdiff_t>(rank - below);
    std::nth_element(members.begin(), nth, members.end());
    return *nth;
}

}  // namespace

FloatField sample_noise_field(std::size_t width, std::size_t height, double mean, double stddev, Rng& rng) {
    if (width == 0 || height == 0) throw InvalidArgument("noise field must be non-empty");
    if (!std::isfinite(stddev) || stddev <= 0.0) throw InvalidArgument("noise stddev must be > 0");
    if (!std::isfinite(mean)) throw InvalidArgument("noise mean must be finite");
    FloatField out(width, height);
    rng.fill_normal(out.values(), mean, stddev);
    return out;
}

FloatField threshold_field(const FloatField& field, double coverage_quantile) {
    if (!(coverage_quantile > 0.0 && coverage_quantile < 1.0)) {
        throw InvalidArgument("coverage quantile must lie in (0, 1)");
    }
    if (field.empty()) throw InvalidArgument("threshold_field: empty field");
    const auto vals = field.values();
    const std::size_t n = vals.size();
    const auto k = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(coverage_quantile * static_cast<double>(n)), 0, static_cast<long long>(n - 1)));

    const double threshold = order_statistic(vals, n - k - 1);

    FloatField out(field.width(), field.height());
    auto dst = out.values();
    for (std::size_t i = 0; i < n; ++i) dst[i] = vals[i] > threshold ? 1.0 : 0.0;
    return out;
}

}  // namespace snowaug
