#pragma once

#include <cstdint>

#include "torind/types.hpp"

namespace torind {

// Poisson characteristic kernel K(theta) = cos(lambda sin theta) *
// exp(lambda (cos theta - 1)). Nonnegative on the whole circle iff
// lambda <= pi/2; larger lambdas are legal but the kernel oscillates.
// Throws std::invalid_argument unless lambda > 0.
double poisson_kernel(double theta, double lambda);

// Omnibus statistic T_{n,lambda}: the V-statistic contrast between the
// joint empirical characteristic function and the product of the marginal
// ones, aggregated with Poisson weights. Evaluated in closed form:
//
//   (1/n)   sum_{jk} K1_{jk} K2_{jk}
// + (1/n^3) (sum_{jk} K1_{jk}) (sum_{jk} K2_{jk})
// - (2/n^2) sum_j (sum_k K1_{jk}) (sum_l K2_{jl})
//
// where Km_{jk} = poisson_kernel(theta_m_j - theta_m_k, lambda). The triple
// sum in the cross term factorizes through row sums, so the whole statistic
// is O(n^2). The result is >= 0 up to roundoff; values in [-1e-10, 0) are
// clamped to 0 and anything lower throws numerical_error.
double t_omnibus(const PairedSample& s, double lambda);

// Brute-force series form of the same statistic:
//   n * sum_{|r1|<=R} sum_{|r2|<=R} (Dc^2 + Ds^2) v(r1) v(r2)
// with v(0) = f(0), v(+-r) = f(r)/2, f the Poisson(lambda) pmf. Requires
// the truncation R to leave tail mass < 1e-12, else std::invalid_argument.
// Quadratic in R and per-term O(n): this is the test oracle, not the
// production path.
double t_omnibus_series(const PairedSample& s, double lambda, int R);

struct PermutationPlan {
  std::size_t B = 10000;   // permutation count
  std::uint64_t seed = 0;  // substream b uses stream (1 << 32) + b
  unsigned threads = 0;    // 0 = hardware concurrency; result is identical
                           // for every thread count
};

// Permutation test for T_{n,lambda}. Both kernel matrices are built once;
// permutation b redraws the pairing by shuffling the second margin, which
// only re-indexes the cached K2 (the pairwise-difference multiset of one
// margin is permutation invariant, so the middle term is constant too).
// p = B^{-1} sum_b 1{T < T*_b}, strict, so p = 0 means "below 1/B".
TestResult permutation_test(const PairedSample& s, double lambda,
                            const PermutationPlan& plan);

}  // namespace torind
