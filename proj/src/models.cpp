#include "torind/models.hpp"

#include <cmath>
#include <stdexcept>

#include "torind/angles.hpp"
#include "torind/vonmises.hpp"

namespace torind {

namespace {

// Moebius transform of a uniform angle; the image is wrapped Cauchy with
// mean 0 and concentration rho in [0, 1) (rho = 0 is the identity map).
double moebius(double psi, double rho) {
  return std::atan2((1.0 - rho * rho) * std::sin(psi),
                    (1.0 + rho * rho) * std::cos(psi) + 2.0 * rho);
}

PairedSample draw_pb(std::size_t n, double p, Philox& rng) {
  PairedSample s;
  s.theta1.reserve(n);
  s.theta2.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(-kPi, kPi);
    const double u = rng.uniform(-kPi, kPi);
    s.theta1.push_back(a);
    s.theta2.push_back(wrap_angle(2.0 * (p * a * a + (1.0 - p) * u * u) / kPi - kPi));
  }
  return s;
}

PairedSample draw_bwc(std::size_t n, double rho1, double rho2, double rho,
                      Philox& rng) {
  const double q = rho < 0.0 ? -1.0 : 1.0;
  const double arho = std::abs(rho);
  PairedSample s;
  s.theta1.reserve(n);
  s.theta2.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double psi1 = rng.uniform(-kPi, kPi);
    const double omega = moebius(rng.uniform(-kPi, kPi), arho);
    const double psi2 = wrap_angle(q * psi1 - omega);
    s.theta1.push_back(wrap_angle(moebius(psi1, rho1)));
    s.theta2.push_back(wrap_angle(moebius(psi2, rho2)));
  }
  return s;
}

PairedSample draw_bcvm(std::size_t n, double k1, double k2, double k3,
                       Interaction inter, Philox& rng, double* accept_rate) {
  const double link_sign = inter == Interaction::positive ? -1.0 : 1.0;
  const double log_bound = k1 + k2 + std::abs(k3);
  PairedSample s;
  s.theta1.reserve(n);
  s.theta2.reserve(n);
  std::size_t attempts = 0;
  while (s.theta1.size() < n) {
    const double a = rng.uniform(-kPi, kPi);
    const double b = rng.uniform(-kPi, kPi);
    const double u = rng.next_double();
    ++attempts;
    const double energy =
        k1 * std::cos(a) + k2 * std::cos(b) + k3 * std::cos(a + link_sign * b);
    if (std::log(u) < energy - log_bound) {
      s.theta1.push_back(a);
      s.theta2.push_back(b);
    }
  }
  if (accept_rate)
    *accept_rate = static_cast<double>(n) / static_cast<double>(attempts);
  return s;
}

PairedSample draw_bvm(std::size_t n, double k1, double k2, double mug,
                      double kg, Philox& rng, std::vector<double>* omega_out) {
  PairedSample s;
  s.theta1.reserve(n);
  s.theta2.reserve(n);
  if (omega_out) {
    omega_out->clear();
    omega_out->reserve(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t1 = draw_vm(rng, 0.0, k1);
    const double omega = draw_vm(rng, mug, kg);
    const double u = vm_cdf(t1, k1) - omega / kTwoPi;
    const double t2 = vm_quantile(u - std::floor(u), k2);
    s.theta1.push_back(t1);
    s.theta2.push_back(t2);
    if (omega_out) omega_out->push_back(omega);
  }
  return s;
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void check_conc(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
}

}  // namespace

ModelSpec ModelSpec::pb(double p) {
  ModelSpec m;
  m.kind = ModelKind::PB;
  m.p = p;
  m.validate();
  return m;
}

ModelSpec ModelSpec::bwc(double rho1, double rho2, double rho) {
  ModelSpec m;
  m.kind = ModelKind::BWC;
  m.rho1 = rho1;
  m.rho2 = rho2;
  m.rho = rho;
  m.validate();
  return m;
}

ModelSpec ModelSpec::bcvm(double kappa1, double kappa2, double kappa3,
                          Interaction inter) {
  ModelSpec m;
  m.kind = ModelKind::BCvM;
  m.kappa1 = kappa1;
  m.kappa2 = kappa2;
  m.kappa3 = kappa3;
  m.interaction = inter;
  m.validate();
  return m;
}

ModelSpec ModelSpec::bvm(double kappa1, double kappa2, double mug,
                         double kappag) {
  ModelSpec m;
  m.kind = ModelKind::BvM;
  m.kappa1 = kappa1;
  m.kappa2 = kappa2;
  m.mug = mug;
  m.kappag = kappag;
  m.validate();
  return m;
}

std::string ModelSpec::name() const {
  switch (kind) {
    case ModelKind::PB: return "pb";
    case ModelKind::BWC: return "bwc";
    case ModelKind::BCvM: return "bcvm";
    case ModelKind::BvM: return "bvm";
  }
  return "?";
}

void ModelSpec::validate() const {
  switch (kind) {
    case ModelKind::PB:
      check_unit(p, "pb: p");
      break;
    case ModelKind::BWC:
      if (!(rho1 >= 0.0 && rho1 < 1.0) || !(rho2 >= 0.0 && rho2 < 1.0))
        throw std::invalid_argument("bwc: rho1, rho2 must lie in [0, 1)");
      if (!(rho > -1.0 && rho < 1.0))
        throw std::invalid_argument("bwc: rho must lie in (-1, 1)");
      break;
    case ModelKind::BCvM:
      check_conc(kappa1, "bcvm: kappa1");
      check_conc(kappa2, "bcvm: kappa2");
      if (!std::isfinite(kappa3))
        throw std::invalid_argument("bcvm: kappa3 must be finite");
      break;
    case ModelKind::BvM:
      check_conc(kappa1, "bvm: kappa1");
      check_conc(kappa2, "bvm: kappa2");
      check_conc(kappag, "bvm: kappag");
      if (!std::isfinite(mug))
        throw std::invalid_argument("bvm: mug must be finite");
      break;
  }
}

double ModelSpec::dependence() const {
  switch (kind) {
    case ModelKind::PB: return p;
    case ModelKind::BWC: return rho;
    case ModelKind::BCvM: return kappa3;
    case ModelKind::BvM: return kappag;
  }
  return 0.0;
}

ModelSpec ModelSpec::with_dependence(double value) const {
  ModelSpec m = *this;
  switch (kind) {
    case ModelKind::PB: m.p = value; break;
    case ModelKind::BWC: m.rho = value; break;
    case ModelKind::BCvM: m.kappa3 = value; break;
    case ModelKind::BvM: m.kappag = value; break;
  }
  m.validate();
  return m;
}

PairedSample ModelSpec::sample(std::size_t n, Philox& rng) const {
  validate();
  switch (kind) {
    case ModelKind::PB: return draw_pb(n, p, rng);
    case ModelKind::BWC: return draw_bwc(n, rho1, rho2, rho, rng);
    case ModelKind::BCvM:
      return draw_bcvm(n, kappa1, kappa2, kappa3, interaction, rng, nullptr);
    case ModelKind::BvM:
      return draw_bvm(n, kappa1, kappa2, mug, kappag, rng, nullptr);
  }
  throw std::invalid_argument("unknown model kind");
}

PairedSample sample_pb(std::size_t n, double p, std::uint64_t seed) {
  check_unit(p, "pb: p");
  Philox rng(seed, streams::kMain);
  return draw_pb(n, p, rng);
}

PairedSample sample_bwc(std::size_t n, double rho1, double rho2, double rho,
                        std::uint64_t seed) {
  ModelSpec::bwc(rho1, rho2, rho);  // range check
  Philox rng(seed, streams::kMain);
  return draw_bwc(n, rho1, rho2, rho, rng);
}

PairedSample sample_bcvm(std::size_t n, double kappa1, double kappa2,
                         double kappa3, Interaction inter, std::uint64_t seed,
                         double* acceptance_rate) {
  ModelSpec::bcvm(kappa1, kappa2, kappa3, inter);
  Philox rng(seed, streams::kMain);
  return draw_bcvm(n, kappa1, kappa2, kappa3, inter, rng, acceptance_rate);
}

PairedSample sample_bvm(std::size_t n, double kappa1, double kappa2,
                        double mug, double kappag, std::uint64_t seed,
                        std::vector<double>* omega_out) {
  ModelSpec::bvm(kappa1, kappa2, mug, kappag);
  Philox rng(seed, streams::kMain);
  return draw_bvm(n, kappa1, kappa2, mug, kappag, rng, omega_out);
}

}  // namespace torind
