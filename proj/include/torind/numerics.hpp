#pragma once

#include <functional>
#include <span>
#include <vector>

namespace torind {

// Upper tail P(X > x) of the chi-square law with df degrees of freedom.
// df = 1 uses erfc(sqrt(x/2)) directly; df = 2 is exp(-x/2); otherwise the
// regularized upper incomplete gamma function Q(df/2, x/2).
double chi2_sf(double x, int df);

// Standard normal quantile (Wichura's AS 241, double precision).
double norm_quantile(double p);

// Kolmogorov-Smirnov sup distance between the empirical CDF of the sample
// (need not be sorted) and a continuous reference CDF.
double ks_distance(std::span<const double> sample,
                   const std::function<double(double)>& cdf);

// Asymptotic two-sided KS p-value with Stephens' small-sample adjustment.
double ks_pvalue(double d, std::size_t n);

// Pearson chi-square goodness-of-fit p-value for observed counts against
// expected counts (same length, expected > 0); df = bins - 1.
double chi2_gof_pvalue(std::span<const double> observed,
                       std::span<const double> expected);

}  // namespace torind
