#include "torind/angles.hpp"

#include <cmath>

namespace torind {

double wrap_angle(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("wrap_angle: non-finite input");
  double y = std::fmod(x + kPi, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  return y - kPi;
}

namespace {

double mean_direction(double sum_sin, double sum_cos, double scale) {
  // scale is the divisor that turns the sums into the mean resultant vector.
  const double rbar = std::hypot(sum_sin, sum_cos) / scale;
  if (rbar < 1e-12)
    throw numerical_error("circular_mean: zero resultant, mean undefined");
  return wrap_angle(std::atan2(sum_sin / scale, sum_cos / scale));
}

}  // namespace

double circular_mean(std::span<const double> angles) {
  if (angles.empty()) throw std::invalid_argument("circular_mean: empty input");
  double s = 0.0, c = 0.0;
  for (double a : angles) {
    s += std::sin(a);
    c += std::cos(a);
  }
  return mean_direction(s, c, static_cast<double>(angles.size()));
}

double weighted_circular_mean(std::span<const double> angles,
                              std::span<const double> weights) {
  if (angles.size() != weights.size())
    throw std::invalid_argument("weighted_circular_mean: length mismatch");
  if (angles.empty())
    throw std::invalid_argument("weighted_circular_mean: empty input");
  double s = 0.0, c = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (weights[i] < 0.0)
      throw std::invalid_argument("weighted_circular_mean: negative weight");
    s += weights[i] * std::sin(angles[i]);
    c += weights[i] * std::cos(angles[i]);
    wsum += weights[i];
  }
  if (wsum <= 0.0)
    throw std::invalid_argument("weighted_circular_mean: all weights zero");
  return mean_direction(s, c, wsum);
}

PairedSample center_sample(const PairedSample& s) {
  const double mu1 = circular_mean(s.theta1);
  const double mu2 = circular_mean(s.theta2);
  PairedSample out;
  out.theta1.reserve(s.size());
  out.theta2.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.theta1.push_back(wrap_angle(s.theta1[i] - mu1));
    out.theta2.push_back(wrap_angle(s.theta2[i] - mu2));
  }
  return out;
}

PairedSample lag_pairs(std::span<const double> series, std::size_t k) {
  if (k == 0) throw std::invalid_argument("lag_pairs: lag must be >= 1");
  if (k >= series.size())
    throw std::invalid_argument("lag_pairs: lag must be smaller than the series length");
  PairedSample out;
  const std::size_t n = series.size() - k;
  out.theta1.reserve(n);
  out.theta2.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.theta1.push_back(series[i]);
    out.theta2.push_back(series[i + k]);
  }
  return out;
}

double axial_to_circular(double theta) {
  if (!(theta >= 0.0 && theta < kPi))
    throw std::invalid_argument("axial_to_circular: input must lie in [0, pi)");
  return wrap_angle(2.0 * theta);
}

}  // namespace torind
