#include "torind/moments.hpp"

#include <cmath>

namespace torind {

TrigMomentSet trig_moments(const PairedSample& s,
                           std::span<const std::pair<int, int>> freqs) {
  if (s.size() == 0) throw std::invalid_argument("trig_moments: empty sample");
  const double n = static_cast<double>(s.size());
  TrigMomentSet m;
  for (const auto& [r1, r2] : freqs) {
    if (!m.jc.count({r1, r2})) {
      double c = 0.0, sn = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double a = r1 * s.theta1[i] + r2 * s.theta2[i];
        c += std::cos(a);
        sn += std::sin(a);
      }
      m.jc[{r1, r2}] = c / n;
      m.js[{r1, r2}] = sn / n;
    }
    if (!m.j1c.count(r1)) {
      double c = 0.0, sn = 0.0;
      for (double t : s.theta1) {
        c += std::cos(r1 * t);
        sn += std::sin(r1 * t);
      }
      m.j1c[r1] = c / n;
      m.j1s[r1] = sn / n;
    }
    if (!m.j2c.count(r2)) {
      double c = 0.0, sn = 0.0;
      for (double t : s.theta2) {
        c += std::cos(r2 * t);
        sn += std::sin(r2 * t);
      }
      m.j2c[r2] = c / n;
      m.j2s[r2] = sn / n;
    }
  }
  return m;
}

}  // namespace torind
