#pragma once

#include <cstdint>
#include <vector>

#include "torind/rng.hpp"

namespace torind {

// Density of the centred von Mises distribution, f(theta; kappa) =
// exp(kappa cos theta) / (2 pi I0(kappa)). kappa must be >= 0.
double vm_density(double theta, double kappa);

// Distribution function F(theta) = integral of vm_density over [-pi, theta],
// absolute error <= 1e-10. Values outside [-pi, pi] clamp to 0 / 1. The
// implementation caches a per-kappa quadrature table (thread-local), so
// repeated calls with the same kappa are cheap.
double vm_cdf(double theta, double kappa);

// Inverse of vm_cdf by bisection: vm_cdf(vm_quantile(u)) = u within 1e-8.
// Throws std::invalid_argument unless u is in [0, 1].
double vm_quantile(double u, double kappa);

// One von Mises(mu, kappa) draw via the Best-Fisher wrapped-Cauchy envelope
// rejection method; kappa below 1e-8 falls back to the uniform law.
double draw_vm(Philox& rng, double mu, double kappa);

// n i.i.d. von Mises(mu, kappa) draws from a fresh generator on the main
// stream of `seed`.
std::vector<double> sample_vm(std::size_t n, double mu, double kappa,
                              std::uint64_t seed);

}  // namespace torind
