#pragma once

#include <span>

#include "torind/types.hpp"

namespace torind {

// Canonicalizes x to [-pi, pi). Total for all finite inputs; +pi maps to -pi.
double wrap_angle(double x);

// atan2 of the mean resultant. Throws numerical_error when the resultant
// length is below 1e-12 (antipodal cancellation leaves the mean undefined).
double circular_mean(std::span<const double> angles);

// Weighted variant; weights must be non-negative with at least one positive.
double weighted_circular_mean(std::span<const double> angles,
                              std::span<const double> weights);

// Subtracts each marginal circular mean and rewraps, so both output margins
// have circular mean 0 (up to floating tolerance). Idempotent.
PairedSample center_sample(const PairedSample& s);

// Pairs (theta_i, theta_{i+k}) from a single series; n_out = len - k.
PairedSample lag_pairs(std::span<const double> series, std::size_t k);

// Doubles an axial angle in [0, pi) into a circular one.
double axial_to_circular(double theta);

}  // namespace torind
