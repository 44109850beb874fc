// Samplers for the four alternative families and the von Mises toolbox
// (density, CDF, quantile, Best-Fisher draws) against reference values and
// the structural identities each construction guarantees.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "torind/angles.hpp"
#include "torind/models.hpp"
#include "torind/numerics.hpp"
#include "torind/rng.hpp"
#include "torind/vonmises.hpp"
#include "oracle_data.hpp"

using namespace torind;
using Catch::Approx;

namespace {

double mean_cos(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::cos(x);
  return s / static_cast<double>(v.size());
}

bool all_in_range(const std::vector<double>& v) {
  for (double x : v)
    if (!(x >= -kPi && x < kPi)) return false;
  return true;
}

}  // namespace

TEST_CASE("vm_cdf matches reference values", "[models][vonmises]") {
  for (const auto& pin : oracle::vm_cdf_pins)
    CHECK(vm_cdf(pin[0], pin[1]) == Approx(pin[2]).margin(5e-10));

  SECTION("endpoints, symmetry, kappa = 0") {
    for (double kappa : {0.0, 0.5, 2.0, 5.0}) {
      CHECK(vm_cdf(-kPi, kappa) == Approx(0.0).margin(1e-12));
      CHECK(vm_cdf(kPi, kappa) == Approx(1.0).margin(1e-12));
      CHECK(vm_cdf(0.0, kappa) == Approx(0.5).margin(1e-10));
      CHECK(vm_cdf(0.7, kappa) + vm_cdf(-0.7, kappa) == Approx(1.0).margin(1e-9));
    }
    CHECK(vm_cdf(1.0, 0.0) == Approx((1.0 + kPi) / kTwoPi).margin(1e-15));
  }
}

TEST_CASE("vm_quantile matches reference values and inverts vm_cdf", "[models][vonmises]") {
  for (const auto& pin : oracle::vm_ppf_pins)
    CHECK(vm_quantile(pin[0], pin[1]) == Approx(pin[2]).margin(1e-10));

  for (double kappa : {0.0, 0.5, 1.0, 2.0, 5.0})
    for (double u : {0.001, 0.1, 0.37, 0.5, 0.81, 0.999})
      CHECK(vm_cdf(vm_quantile(u, kappa), kappa) == Approx(u).margin(1e-8));

  CHECK(vm_quantile(0.0, 1.0) == -kPi);
  CHECK(vm_quantile(1.0, 1.0) == kPi);
  CHECK_THROWS_AS(vm_quantile(-0.01, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(vm_quantile(1.01, 1.0), std::invalid_argument);
}

TEST_CASE("vm_density normalizes and peaks at the mean", "[models][vonmises]") {
  // Ratio at mode vs antimode is exp(2 kappa); integral over the circle is 1.
  CHECK(vm_density(0.0, 2.0) / vm_density(kPi, 2.0) == Approx(std::exp(4.0)).epsilon(1e-12));
  const int m = 20000;
  double integral = 0.0;
  for (int i = 0; i < m; ++i)
    integral += vm_density(-kPi + kTwoPi * (i + 0.5) / m, 1.3) * (kTwoPi / m);
  CHECK(integral == Approx(1.0).margin(1e-10));
}

TEST_CASE("sample_vm produces the right distribution", "[models][vonmises]") {
  SECTION("kappa = 0 is uniform") {
    const std::vector<double> x = sample_vm(4000, 0.0, 0.0, 11);
    REQUIRE(all_in_range(x));
    const double d = ks_distance(x, [](double t) { return (t + kPi) / kTwoPi; });
    CHECK(ks_pvalue(d, 4000) > 0.001);
  }
  SECTION("kappa = 2 mean resultant length matches I1(2)/I0(2)") {
    const std::vector<double> x = sample_vm(20000, 0.0, 2.0, 12);
    CHECK(mean_cos(x) == Approx(oracle::bessel_ratio_2).margin(0.015));
  }
  SECTION("KS against the CDF used for quantiles") {
    const std::vector<double> x = sample_vm(4000, 0.0, 1.5, 13);
    const double d = ks_distance(x, [](double t) { return vm_cdf(t, 1.5); });
    CHECK(ks_pvalue(d, 4000) > 0.001);
  }
  SECTION("nonzero mean direction") {
    const std::vector<double> x = sample_vm(20000, 1.0, 2.0, 14);
    double ss = 0.0, cc = 0.0;
    for (double t : x) {
      cc += std::cos(t);
      ss += std::sin(t);
    }
    CHECK(std::atan2(ss, cc) == Approx(1.0).margin(0.05));
  }
}

TEST_CASE("parabolic sampler matches the frozen stream", "[models]") {
  const PairedSample s = sample_pb(4, 0.4, 2026);
  for (int i = 0; i < 4; ++i) {
    CHECK(s.theta1[i] == oracle::pb_seed2026_p04_t1[i]);
    CHECK(s.theta2[i] == oracle::pb_seed2026_p04_t2[i]);
  }
}

TEST_CASE("parabolic sampler structure", "[models]") {
  SECTION("p = 1 is a deterministic function of theta1") {
    const PairedSample s = sample_pb(200, 1.0, 5);
    REQUIRE(all_in_range(s.theta1));
    REQUIRE(all_in_range(s.theta2));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double expect = wrap_angle(2.0 * s.theta1[i] * s.theta1[i] / kPi - kPi);
      CHECK(s.theta2[i] == Approx(expect).margin(1e-15));
    }
  }
  SECTION("theta1 margin is uniform") {
    const PairedSample s = sample_pb(4000, 0.3, 6);
    const double d =
        ks_distance(s.theta1, [](double t) { return (t + kPi) / kTwoPi; });
    CHECK(ks_pvalue(d, 4000) > 0.001);
  }
  SECTION("p outside [0,1] is rejected") {
    CHECK_THROWS_AS(sample_pb(10, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_pb(10, 1.0001, 1), std::invalid_argument);
  }
}

TEST_CASE("wrapped Cauchy sampler structure", "[models]") {
  SECTION("margins have resultant length rho_j") {
    // E[cos theta] = rho for WC(0, rho), any coupling strength.
    const PairedSample s = sample_bwc(20000, 0.5, 0.2, -0.6, 31);
    REQUIRE(all_in_range(s.theta1));
    REQUIRE(all_in_range(s.theta2));
    CHECK(mean_cos(s.theta1) == Approx(0.5).margin(0.02));
    CHECK(mean_cos(s.theta2) == Approx(0.2).margin(0.02));
  }
  SECTION("rho = 0 decouples the margins") {
    const PairedSample s = sample_bwc(20000, 0.3, 0.3, 0.0, 32);
    double c = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      c += std::cos(s.theta1[i] - s.theta2[i]);
    // under independence E[cos(t1 - t2)] = rho1 * rho2 = 0.09
    CHECK(c / 20000.0 == Approx(0.09).margin(0.02));
  }
  SECTION("negative rho couples through the reflected angle") {
    const PairedSample neg = sample_bwc(8000, 0.1, 0.1, -0.8, 33);
    const PairedSample pos = sample_bwc(8000, 0.1, 0.1, 0.8, 34);
    double cn = 0.0, cp = 0.0;
    for (std::size_t i = 0; i < neg.size(); ++i) {
      cn += std::cos(neg.theta1[i] + neg.theta2[i]);
      cp += std::cos(pos.theta1[i] - pos.theta2[i]);
    }
    CHECK(cn / 8000.0 > 0.4);
    CHECK(cp / 8000.0 > 0.4);
  }
  SECTION("parameter validation") {
    CHECK_THROWS_AS(sample_bwc(10, 1.0, 0.1, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_bwc(10, 0.1, -0.2, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_bwc(10, 0.1, 0.1, 1.0, 1), std::invalid_argument);
  }
}

TEST_CASE("cosine-interaction sampler structure", "[models]") {
  SECTION("kappa3 = 0 factorizes into von Mises margins") {
    double rate = 0.0;
    const PairedSample s =
        sample_bcvm(20000, 2.0, 0.0, 0.0, Interaction::positive, 41, &rate);
    REQUIRE(all_in_range(s.theta1));
    REQUIRE(all_in_range(s.theta2));
    CHECK(mean_cos(s.theta1) == Approx(oracle::bessel_ratio_2).margin(0.015));
    // theta2 margin is uniform when kappa2 = 0
    const double d =
        ks_distance(s.theta2, [](double t) { return (t + kPi) / kTwoPi; });
    CHECK(ks_pvalue(d, 20000) > 0.001);
    // acceptance rate should sit near its theoretical value I0(2) e^{-2}
    CHECK(rate == Approx(std::cyl_bessel_i(0.0, 2.0) * std::exp(-2.0)).margin(0.02));
  }
  SECTION("interaction sign selects the coupled contrast") {
    const PairedSample pos =
        sample_bcvm(6000, 0.0, 0.0, 3.0, Interaction::positive, 42);
    const PairedSample neg =
        sample_bcvm(6000, 0.0, 0.0, 3.0, Interaction::negative, 43);
    double cp = 0.0, cn = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      cp += std::cos(pos.theta1[i] - pos.theta2[i]);
      cn += std::cos(neg.theta1[i] + neg.theta2[i]);
    }
    // E[cos(link)] = I1(3)/I0(3) ~ 0.81 under the coupled contrast
    const double expect = std::cyl_bessel_i(1.0, 3.0) / std::cyl_bessel_i(0.0, 3.0);
    CHECK(cp / 6000.0 == Approx(expect).margin(0.03));
    CHECK(cn / 6000.0 == Approx(expect).margin(0.03));
  }
  SECTION("parameter validation") {
    CHECK_THROWS_AS(sample_bcvm(10, -1.0, 1.0, 0.0, Interaction::positive, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("von Mises link sampler structure", "[models]") {
  SECTION("the link identity holds for every draw") {
    std::vector<double> omega;
    const PairedSample s = sample_bvm(200, 1.0, 1.5, 0.7, 2.0, 51, &omega);
    REQUIRE(omega.size() == 200);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double res = wrap_angle(
          kTwoPi * (vm_cdf(s.theta1[i], 1.0) - vm_cdf(s.theta2[i], 1.5)) -
          omega[i]);
      CHECK(std::abs(res) <= 1e-6);
    }
  }
  SECTION("margins are von Mises") {
    const PairedSample s = sample_bvm(20000, 2.0, 2.0, 0.0, 1.0, 52);
    REQUIRE(all_in_range(s.theta1));
    REQUIRE(all_in_range(s.theta2));
    CHECK(mean_cos(s.theta1) == Approx(oracle::bessel_ratio_2).margin(0.015));
    CHECK(mean_cos(s.theta2) == Approx(oracle::bessel_ratio_2).margin(0.015));
  }
  SECTION("kappag = 0 gives an exactly independent second margin") {
    const PairedSample s = sample_bvm(4000, 1.0, 1.0, 0.0, 0.0, 53);
    const double d =
        ks_distance(s.theta2, [](double t) { return vm_cdf(t, 1.0); });
    CHECK(ks_pvalue(d, 4000) > 0.001);
  }
  SECTION("parameter validation") {
    CHECK_THROWS_AS(sample_bvm(10, -1.0, 1.0, 0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_bvm(10, 1.0, 1.0, 0.0, -1.0, 1), std::invalid_argument);
  }
}

TEST_CASE("ModelSpec plumbing", "[models]") {
  const ModelSpec pb = ModelSpec::pb(0.4);
  CHECK(pb.name() == "pb");
  CHECK(pb.dependence() == 0.4);
  CHECK(pb.with_dependence(0.7).p == 0.7);

  const ModelSpec bwc = ModelSpec::bwc(0.1, 0.1, -0.4);
  CHECK(bwc.name() == "bwc");
  CHECK(bwc.dependence() == -0.4);
  CHECK(bwc.with_dependence(-0.8).rho == -0.8);

  const ModelSpec bcvm = ModelSpec::bcvm(1.0, 1.0, 2.0);
  CHECK(bcvm.name() == "bcvm");
  CHECK(bcvm.dependence() == 2.0);
  CHECK(bcvm.with_dependence(0.5).kappa3 == 0.5);

  const ModelSpec bvm = ModelSpec::bvm(1.0, 1.0, 0.0, 3.0);
  CHECK(bvm.name() == "bvm");
  CHECK(bvm.dependence() == 3.0);
  CHECK(bvm.with_dependence(1.5).kappag == 1.5);

  CHECK_THROWS_AS(ModelSpec::pb(1.5), std::invalid_argument);
  CHECK_THROWS_AS(bwc.with_dependence(1.0), std::invalid_argument);
}

TEST_CASE("ModelSpec::sample is reproducible and stream-separated", "[models]") {
  for (const ModelSpec& spec :
       {ModelSpec::pb(0.5), ModelSpec::bwc(0.1, 0.1, -0.4),
        ModelSpec::bcvm(1.0, 1.0, 1.0), ModelSpec::bvm(1.0, 1.0, 0.0, 1.0)}) {
    Philox r1(77, streams::kPowerRep + 5);
    Philox r2(77, streams::kPowerRep + 5);
    Philox r3(77, streams::kPowerRep + 6);
    const PairedSample a = spec.sample(25, r1);
    const PairedSample b = spec.sample(25, r2);
    const PairedSample c = spec.sample(25, r3);
    REQUIRE(a.size() == 25);
    CHECK(a.theta1 == b.theta1);
    CHECK(a.theta2 == b.theta2);
    CHECK(a.theta1 != c.theta1);
  }
}
