#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace torind {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Thrown when a statistic cannot be computed from the data itself
// (degenerate variance, singular covariance, undefined circular mean).
// Distinct from std::invalid_argument so callers can map it to a
// "numerical failure" exit path instead of a usage error.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Paired angular observations (theta1_i, theta2_i), radians in [-pi, pi).
// Stored as two parallel columns; order is significant (permutation
// calibration re-pairs the second column only).
struct PairedSample {
  std::vector<double> theta1;
  std::vector<double> theta2;

  PairedSample() = default;
  PairedSample(std::vector<double> t1, std::vector<double> t2)
      : theta1(std::move(t1)), theta2(std::move(t2)) {
    if (theta1.size() != theta2.size())
      throw std::invalid_argument("PairedSample: column lengths differ");
  }

  std::size_t size() const { return theta1.size(); }
};

struct TestResult {
  std::string test;    // human-readable statistic name
  double statistic = 0.0;
  double p_value = 0.0;
  std::string method;  // "asymptotic-chisq" | "permutation"
  long df_or_B = 0;    // chi-square df, or permutation count B
  std::size_t n = 0;
  std::map<std::string, std::string> params;
};

}  // namespace torind
