#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "torind/cosine_test.hpp"
#include "torind/models.hpp"
#include "torind/multi_test.hpp"
#include "torind/types.hpp"

namespace torind {

// One column of a power table: a single-order cosine test, a multi-order
// quadratic-form test, or the omnibus statistic at a given lambda.
struct TestDescriptor {
  enum class Kind { cosine, multi, omnibus };
  Kind kind = Kind::cosine;
  FrequencyPair freq{1, 1};
  MultiOrderSpec mspec;
  double lambda = 0.5;

  static TestDescriptor cosine(int r1, int r2);
  static TestDescriptor multi(MultiOrderSpec spec);
  static TestDescriptor omnibus(double lambda);

  // Matches the `test` field of the TestResult the underlying module emits.
  std::string name() const;
  // The test statistic on a raw sample (cosine/multi centre internally; the
  // omnibus statistic is rotation invariant and is evaluated as-is).
  double statistic(const PairedSample& s) const;
};

enum class Calibration { two_sample, permutation };

struct BenchConfig {
  ModelSpec model;
  std::vector<double> grid;  // dependence-parameter values, one table row each
  std::size_t n = 50;
  std::size_t M = 2000;
  std::size_t Mc = 0;  // critical-value replicates; 0 means "use M"
  double alpha = 0.05;
  std::vector<TestDescriptor> tests;
  Calibration calibration = Calibration::two_sample;
  std::size_t B = 200;  // permutations per replicate (permutation calibration)
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects values
};

struct PowerCell {
  double param = 0.0;
  std::string test;
  std::size_t hits = 0;
  std::size_t M = 0;
  double rate = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
};

struct PowerTable {
  std::string model;
  std::size_t n = 0;
  std::size_t M = 0;
  double alpha = 0.0;
  std::string calibration;
  std::vector<PowerCell> cells;  // grid-major, then test order
};

// Wilson score interval for hits/M at the given confidence level; the
// endpoints are exactly 0 / 1 in the degenerate hits = 0 / hits = M cases.
std::pair<double, double> wilson_ci(std::size_t hits, std::size_t M,
                                    double level);

// Benjamini-Yekutieli step-up FDR adjustment, returned in input order.
// Throws std::invalid_argument if any p lies outside [0, 1].
std::vector<double> by_correction(const std::vector<double>& pvals);

// Empirical (1 - alpha) statistic quantile under the model's margins with
// dependence destroyed: each of the Mc replicates draws two independent
// samples and evaluates the test on the cross-paired sample (first margin
// from one, second from the other). The order statistic used is the
// ceil(Mc (1 - alpha))-th smallest. The vector overload shares the Mc
// cross-paired samples across all tests.
std::vector<double> critical_values_two_sample(
    const ModelSpec& model, const std::vector<TestDescriptor>& tests,
    std::size_t n, std::size_t Mc, double alpha, std::uint64_t seed,
    unsigned threads = 0);
double critical_value_two_sample(const ModelSpec& model,
                                 const TestDescriptor& test, std::size_t n,
                                 std::size_t Mc, double alpha,
                                 std::uint64_t seed, unsigned threads = 0);

// Rejection rate of every configured test at every grid point, with Wilson
// intervals. Replicate m draws from substream m, so cell values are
// independent of the thread count. Sampler or test failures are rethrown
// with the replicate index attached.
PowerTable empirical_power(const BenchConfig& cfg);

// Serializations: CSV columns model,param,test,n,M,rate,wilson_lo,wilson_hi
// (RFC 4180 quoting; the omnibus test name contains a comma) and a
// structurally identical JSON mirror. Rates use 6 significant digits.
std::string to_csv(const PowerTable& table);
std::string to_json(const PowerTable& table);

}  // namespace torind
