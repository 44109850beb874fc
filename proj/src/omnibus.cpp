#include "torind/omnibus.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "torind/cosine_test.hpp"
#include "torind/parallel.hpp"
#include "torind/rng.hpp"

namespace torind {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("poisson kernel: lambda must be positive");
}

double kernel_raw(double theta, double lambda) {
  return std::cos(lambda * std::sin(theta)) *
         std::exp(lambda * (std::cos(theta) - 1.0));
}

// n x n kernel matrix of pairwise differences within one margin. The kernel
// is even, so the mirrored lower triangle is exact.
std::vector<double> kernel_matrix(const std::vector<double>& th, double lambda) {
  const std::size_t n = th.size();
  std::vector<double> k(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    k[j * n + j] = 1.0;
    for (std::size_t l = j + 1; l < n; ++l) {
      const double v = kernel_raw(th[j] - th[l], lambda);
      k[j * n + l] = v;
      k[l * n + j] = v;
    }
  }
  return k;
}

std::vector<double> row_sums(const std::vector<double>& k, std::size_t n) {
  std::vector<double> rs(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) rs[j] += k[j * n + l];
  return rs;
}

double clamp_stat(double t) {
  if (t >= 0.0) return t;
  if (t >= -1e-10) return 0.0;
  throw numerical_error("t_omnibus produced a significantly negative value");
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

double poisson_kernel(double theta, double lambda) {
  check_lambda(lambda);
  return kernel_raw(theta, lambda);
}

double t_omnibus(const PairedSample& s, double lambda) {
  check_lambda(lambda);
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("t_omnibus: empty sample");

  const auto k1 = kernel_matrix(s.theta1, lambda);
  const auto k2 = kernel_matrix(s.theta2, lambda);
  const auto rs1 = row_sums(k1, n);
  const auto rs2 = row_sums(k2, n);

  double term1 = 0.0, cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) term1 += k1[j * n + l] * k2[j * n + l];
    cross += rs1[j] * rs2[j];
  }
  const double s1 = std::accumulate(rs1.begin(), rs1.end(), 0.0);
  const double s2 = std::accumulate(rs2.begin(), rs2.end(), 0.0);
  const double nd = static_cast<double>(n);
  return clamp_stat(term1 / nd + s1 * s2 / (nd * nd * nd) -
                    2.0 * cross / (nd * nd));
}

double t_omnibus_series(const PairedSample& s, double lambda, int R) {
  check_lambda(lambda);
  if (R < 0) throw std::invalid_argument("t_omnibus_series: R must be >= 0");
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("t_omnibus_series: empty sample");

  // Poisson(lambda) pmf by recurrence; insist the truncated mass covers all
  // but 1e-12 of the distribution.
  std::vector<double> f(static_cast<std::size_t>(R) + 1);
  f[0] = std::exp(-lambda);
  double mass = f[0];
  for (int r = 1; r <= R; ++r) {
    f[r] = f[r - 1] * lambda / r;
    mass += f[r];
  }
  if (mass < 1.0 - 1e-12)
    throw std::invalid_argument(
        "t_omnibus_series: truncation R leaves Poisson tail mass >= 1e-12");

  const auto v = [&](int r) { return r == 0 ? f[0] : f[std::abs(r)] / 2.0; };
  double tot = 0.0;
  for (int r1 = -R; r1 <= R; ++r1)
    for (int r2 = -R; r2 <= R; ++r2) {
      const double dc = d_cos(s, {r1, r2});
      const double ds = d_sin(s, {r1, r2});
      tot += (dc * dc + ds * ds) * v(r1) * v(r2);
    }
  return clamp_stat(static_cast<double>(n) * tot);
}

TestResult permutation_test(const PairedSample& s, double lambda,
                            const PermutationPlan& plan) {
  check_lambda(lambda);
  const std::size_t n = s.size();
  if (n < 2) throw std::invalid_argument("permutation_test: need n >= 2");
  if (plan.B == 0) throw std::invalid_argument("permutation_test: need B >= 1");

  const auto k1 = kernel_matrix(s.theta1, lambda);
  const auto k2 = kernel_matrix(s.theta2, lambda);
  const auto rs1 = row_sums(k1, n);
  const auto rs2 = row_sums(k2, n);
  const double nd = static_cast<double>(n);
  const double s1 = std::accumulate(rs1.begin(), rs1.end(), 0.0);
  const double s2 = std::accumulate(rs2.begin(), rs2.end(), 0.0);
  const double term2 = s1 * s2 / (nd * nd * nd);

  double term1 = 0.0, cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) term1 += k1[j * n + l] * k2[j * n + l];
    cross += rs1[j] * rs2[j];
  }
  // Raw (unclamped) value is what the permuted replicas are compared to.
  const double t_raw = term1 / nd + term2 - 2.0 * cross / (nd * nd);

  std::vector<std::uint8_t> hit(plan.B, 0);
  parallel_for(plan.B, plan.threads, [&](std::size_t b) {
    Philox rng(plan.seed, streams::kPermutation + b);
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::uint32_t{0});
    shuffle_indices(idx, rng);
    double t1b = 0.0, crossb = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double* k1row = &k1[j * n];
      const double* k2row = &k2[idx[j] * n];
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += k1row[l] * k2row[idx[l]];
      t1b += acc;
      crossb += rs1[j] * rs2[idx[j]];
    }
    const double tb = t1b / nd + term2 - 2.0 * crossb / (nd * nd);
    hit[b] = t_raw < tb ? 1 : 0;
  });
  std::size_t hits = 0;
  for (auto h : hit) hits += h;

  TestResult res;
  res.test = "Tn," + fmt_g(lambda);
  res.statistic = clamp_stat(t_raw);
  res.p_value = static_cast<double>(hits) / static_cast<double>(plan.B);
  res.method = "permutation";
  res.df_or_B = static_cast<long>(plan.B);
  res.n = n;
  res.params["lambda"] = fmt_g(lambda);
  res.params["seed"] = std::to_string(plan.seed);
  if (lambda > kPi / 2.0) res.params["kernel_nonneg"] = "false";
  return res;
}

}  // namespace torind
