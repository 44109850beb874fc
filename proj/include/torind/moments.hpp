#pragma once

#include <span>
#include <utility>

#include "torind/types.hpp"

namespace torind {

// Empirical trigonometric moments. Marginal moments are indexed by a single
// integer frequency, joint "addition" moments by a frequency pair:
//   j1c(r) = n^-1 sum cos(r theta1_i)        j1s(r) = n^-1 sum sin(r theta1_i)
//   jc(r1,r2) = n^-1 sum cos(r1 theta1_i + r2 theta2_i),  js analogous.
struct TrigMomentSet {
  std::map<int, double> j1c, j1s, j2c, j2s;
  std::map<std::pair<int, int>, double> jc, js;

  double joint_c(int r1, int r2) const { return jc.at({r1, r2}); }
  double joint_s(int r1, int r2) const { return js.at({r1, r2}); }
  double marg_c(int margin, int r) const {
    return margin == 1 ? j1c.at(r) : j2c.at(r);
  }
  double marg_s(int margin, int r) const {
    return margin == 1 ? j1s.at(r) : j2s.at(r);
  }
};

// Computes joint moments at every requested frequency pair plus the marginal
// moments those pairs imply ((r1,0) and (0,r2) per pair). Marginals are
// evaluated by direct single-margin summation, not as jc(r,0).
TrigMomentSet trig_moments(const PairedSample& s,
                           std::span<const std::pair<int, int>> freqs);

}  // namespace torind
