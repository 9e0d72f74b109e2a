#include "snowaug/core/seed.hpp"

#include <boost/random/normal_distribution.hpp>

namespace snowaug {

double Rng::normal(double mean, double stddev) {
    return boost::random::normal_distribution<double>(mean, stddev)(engine_);
}

void Rng::fill_normal(std::span<double> out, double mean, double stddev) {
    boost::random::normal_distribution<double> dist(mean, stddev);
    for (double& v : out) v = dist(engine_);
}

}  // namespace snowaug
