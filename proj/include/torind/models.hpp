#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torind/rng.hpp"
#include "torind/types.hpp"

namespace torind {

enum class ModelKind { PB, BWC, BCvM, BvM };
enum class Interaction { positive, negative };

// One of the four toroidal alternative families. Each has a single
// "dependence" parameter whose zero value makes the margins exactly
// independent: p (PB), rho (BWC), kappa3 (BCvM), kappag (BvM).
struct ModelSpec {
  ModelKind kind = ModelKind::PB;

  double p = 0.0;                                  // PB
  double rho1 = 0.0, rho2 = 0.0, rho = 0.0;        // BWC
  double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0; // BCvM (+ BvM margins)
  Interaction interaction = Interaction::positive; // BCvM
  double mug = 0.0, kappag = 0.0;                  // BvM link

  static ModelSpec pb(double p);
  static ModelSpec bwc(double rho1, double rho2, double rho);
  static ModelSpec bcvm(double kappa1, double kappa2, double kappa3,
                        Interaction inter = Interaction::positive);
  static ModelSpec bvm(double kappa1, double kappa2, double mug, double kappag);

  std::string name() const;  // "pb" | "bwc" | "bcvm" | "bvm"
  void validate() const;     // throws std::invalid_argument on bad ranges
  double dependence() const;
  ModelSpec with_dependence(double value) const;

  // n draws consuming `rng`; bit-reproducible given the generator state.
  PairedSample sample(std::size_t n, Philox& rng) const;
};

// Parabolic model: theta1 uniform, theta2 = wrap(2(p theta1^2 +
// (1-p) U^2)/pi - pi) with an independent uniform U. p in [0, 1].
PairedSample sample_pb(std::size_t n, double p, std::uint64_t seed);

// Bivariate wrapped Cauchy via the circula construction: uniform angles are
// pushed through the Moebius map m(psi; rho) = atan2((1-rho^2) sin psi,
// (1+rho^2) cos psi + 2 rho) (which realizes WC(0, rho)); the second margin
// reuses the first one's uniform through psi2 = wrap(sign(rho) psi1 - omega)
// with omega ~ WC(0, |rho|). Margins are exactly WC(0, rho1) / WC(0, rho2),
// and rho = 0 gives exact independence.
PairedSample sample_bwc(std::size_t n, double rho1, double rho2, double rho,
                        std::uint64_t seed);

// Bivariate cosine (von Mises-like) model with density proportional to
// exp{kappa1 cos t1 + kappa2 cos t2 + kappa3 cos(t1 -+ t2)} (minus for
// positive interaction), sampled by uniform-proposal rejection with
// acceptance bound exp{kappa1 + kappa2 + |kappa3|}. If acceptance_rate is
// non-null it receives draws/attempts.
PairedSample sample_bcvm(std::size_t n, double kappa1, double kappa2,
                         double kappa3, Interaction inter, std::uint64_t seed,
                         double* acceptance_rate = nullptr);

// Bivariate von Mises margins coupled through a von Mises link density on
// 2 pi {F1(t1) - F2(t2)}: draw t1 ~ vM(0, kappa1), omega ~ vM(mug, kappag),
// then t2 = F2^{-1}(frac(F1(t1) - omega / 2 pi)), which satisfies the link
// identity exactly. If omega_out is non-null the link draws are stored for
// residual checks.
PairedSample sample_bvm(std::size_t n, double kappa1, double kappa2,
                        double mug, double kappag, std::uint64_t seed,
                        std::vector<double>* omega_out = nullptr);

}  // namespace torind
