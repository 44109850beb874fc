#include "torind/vonmises.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

#include "torind/angles.hpp"
#include "torind/types.hpp"

namespace torind {

namespace {

void check_kappa(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("von Mises: kappa must be finite and >= 0");
}

// CDF table on a uniform grid over [-pi, pi]: cumulative Simpson values and
// scaled densities for Hermite interpolation between knots.
struct VmTable {
  double h = 0.0;
  std::vector<double> cdf;   // F at knots, normalized so cdf.back() == 1
  std::vector<double> dens;  // F' at knots, same normalization
};

std::vector<double> cumulative_simpson(double kappa, std::size_t n,
                                       std::vector<double>& dens) {
  const double norm = 1.0 / (kTwoPi * std::cyl_bessel_i(0.0, kappa));
  const auto f = [&](double t) { return std::exp(kappa * std::cos(t)) * norm; };
  const double h = kTwoPi / static_cast<double>(n);
  dens.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) dens[i] = f(-kPi + h * static_cast<double>(i));
  std::vector<double> cdf(n + 1);
  cdf[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = f(-kPi + h * (static_cast<double>(i) + 0.5));
    cdf[i + 1] = cdf[i] + h / 6.0 * (dens[i] + 4.0 * mid + dens[i + 1]);
  }
  return cdf;
}

std::shared_ptr<const VmTable> build_table(double kappa) {
  auto table = std::make_shared<VmTable>();
  std::size_t n = 256;
  std::vector<double> dens;
  std::vector<double> cdf = cumulative_simpson(kappa, n, dens);
  for (;;) {
    if (n >= (1u << 20))
      throw numerical_error("vm_cdf: quadrature did not converge");
    std::vector<double> dens2;
    std::vector<double> cdf2 = cumulative_simpson(kappa, 2 * n, dens2);
    double err = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      err = std::max(err, std::abs(cdf2[2 * i] - cdf[i]));
    cdf = std::move(cdf2);
    dens = std::move(dens2);
    n *= 2;
    if (err < 5e-11) break;
  }
  const double total = cdf.back();
  for (auto& v : cdf) v /= total;
  for (auto& v : dens) v /= total;
  table->h = kTwoPi / static_cast<double>(n);
  table->cdf = std::move(cdf);
  table->dens = std::move(dens);
  return table;
}

const VmTable& table_for(double kappa) {
  thread_local std::map<double, std::shared_ptr<const VmTable>> cache;
  auto it = cache.find(kappa);
  if (it == cache.end()) it = cache.emplace(kappa, build_table(kappa)).first;
  return *it->second;
}

double eval_table(const VmTable& tab, double theta) {
  if (theta <= -kPi) return 0.0;
  if (theta >= kPi) return 1.0;
  const double pos = (theta + kPi) / tab.h;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= tab.cdf.size() - 1) i = tab.cdf.size() - 2;
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  // Cubic Hermite with exact derivatives (the density) at the knots.
  return tab.cdf[i] * (2.0 * t3 - 3.0 * t2 + 1.0) +
         tab.h * tab.dens[i] * (t3 - 2.0 * t2 + t) +
         tab.cdf[i + 1] * (-2.0 * t3 + 3.0 * t2) +
         tab.h * tab.dens[i + 1] * (t3 - t2);
}

}  // namespace

double vm_density(double theta, double kappa) {
  check_kappa(kappa);
  return std::exp(kappa * std::cos(theta)) /
         (kTwoPi * std::cyl_bessel_i(0.0, kappa));
}

double vm_cdf(double theta, double kappa) {
  check_kappa(kappa);
  if (!std::isfinite(theta)) throw std::invalid_argument("vm_cdf: non-finite angle");
  if (kappa == 0.0)
    return std::clamp((theta + kPi) / kTwoPi, 0.0, 1.0);
  return eval_table(table_for(kappa), theta);
}

double vm_quantile(double u, double kappa) {
  check_kappa(kappa);
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("vm_quantile: u must lie in [0, 1]");
  if (kappa == 0.0) return -kPi + u * kTwoPi;
  if (u == 0.0) return -kPi;
  if (u == 1.0) return kPi;
  const VmTable& tab = table_for(kappa);
  double lo = -kPi, hi = kPi;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (eval_table(tab, mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double draw_vm(Philox& rng, double mu, double kappa) {
  check_kappa(kappa);
  if (kappa < 1e-8) return rng.uniform(-kPi, kPi);

  // Best-Fisher envelope constants.
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    const double z = std::cos(kPi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double u3 = rng.next_double();
      const double theta = (u3 > 0.5 ? 1.0 : -1.0) * std::acos(f);
      return wrap_angle(mu + theta);
    }
  }
}

std::vector<double> sample_vm(std::size_t n, double mu, double kappa,
                              std::uint64_t seed) {
  Philox rng(seed, streams::kMain);
  std::vector<double> out(n);
  for (auto& v : out) v = draw_vm(rng, mu, kappa);
  return out;
}

}  // namespace torind
