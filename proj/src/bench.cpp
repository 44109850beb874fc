#include "torind/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "torind/angles.hpp"
#include "torind/numerics.hpp"
#include "torind/omnibus.hpp"
#include "torind/parallel.hpp"
#include "torind/rng.hpp"

namespace torind {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// RFC 4180 quoting; the omnibus display name "Tn,<lambda>" contains a comma.
std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// Statistic of a pre-centred sample under permutation of the second margin.
// Margins (hence circular means) are permutation invariant, so permuting the
// centred values is exactly "permute, then run the centring test".
double uncentred_statistic(const TestDescriptor& t, const PairedSample& s) {
  switch (t.kind) {
    case TestDescriptor::Kind::cosine:
      return cosine_test(s, t.freq, false).statistic;
    case TestDescriptor::Kind::multi:
      return multi_test(s, t.mspec, false).statistic;
    case TestDescriptor::Kind::omnibus:
      return t_omnibus(s, t.lambda);
  }
  throw std::invalid_argument("unknown test kind");
}

double permutation_pvalue(const TestDescriptor& t, const PairedSample& s,
                          std::size_t B, std::uint64_t seed) {
  if (t.kind == TestDescriptor::Kind::omnibus) {
    PermutationPlan plan;
    plan.B = B;
    plan.seed = seed;
    plan.threads = 1;  // the caller parallelizes over replicates
    return permutation_test(s, t.lambda, plan).p_value;
  }
  const PairedSample cs = center_sample(s);
  const double t_obs = uncentred_statistic(t, cs);
  const std::size_t n = cs.size();
  std::size_t hits = 0;
  std::vector<std::uint32_t> idx(n);
  PairedSample perm = cs;
  for (std::size_t b = 0; b < B; ++b) {
    Philox rng(seed, streams::kPermutation + b);
    std::iota(idx.begin(), idx.end(), std::uint32_t{0});
    shuffle_indices(idx, rng);
    for (std::size_t j = 0; j < n; ++j) perm.theta2[j] = cs.theta2[idx[j]];
    if (t_obs < uncentred_statistic(t, perm)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(B);
}

void validate_config(const BenchConfig& cfg) {
  cfg.model.validate();
  if (cfg.grid.empty()) throw std::invalid_argument("bench: empty grid");
  if (cfg.tests.empty()) throw std::invalid_argument("bench: no tests requested");
  if (cfg.M < 1) throw std::invalid_argument("bench: M must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("bench: alpha must lie in (0, 1)");
  if (cfg.n < 2) throw std::invalid_argument("bench: n must be >= 2");
  if (cfg.calibration == Calibration::permutation && cfg.B < 1)
    throw std::invalid_argument("bench: B must be >= 1");
}

template <typename Fn>
void run_replicates(std::size_t count, unsigned threads, const Fn& body) {
  parallel_for(count, threads, [&](std::size_t m) {
    try {
      body(m);
    } catch (const numerical_error& e) {
      throw numerical_error("replicate " + std::to_string(m) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("replicate " + std::to_string(m) + ": " + e.what());
    }
  });
}

}  // namespace

TestDescriptor TestDescriptor::cosine(int r1, int r2) {
  TestDescriptor t;
  t.kind = Kind::cosine;
  t.freq = FrequencyPair{r1, r2};
  return t;
}

TestDescriptor TestDescriptor::multi(MultiOrderSpec spec) {
  TestDescriptor t;
  t.kind = Kind::multi;
  t.mspec = std::move(spec);
  return t;
}

TestDescriptor TestDescriptor::omnibus(double lambda) {
  TestDescriptor t;
  t.kind = Kind::omnibus;
  t.lambda = lambda;
  return t;
}

std::string TestDescriptor::name() const {
  switch (kind) {
    case Kind::cosine:
      return "Tn(" + std::to_string(freq.r1) + "," + std::to_string(freq.r2) + ")";
    case Kind::multi:
      return spec_name(mspec);
    case Kind::omnibus:
      return "Tn," + fmt_g(lambda);
  }
  return "?";
}

double TestDescriptor::statistic(const PairedSample& s) const {
  switch (kind) {
    case Kind::cosine:
      return cosine_test(s, freq).statistic;
    case Kind::multi:
      return multi_test(s, mspec).statistic;
    case Kind::omnibus:
      return t_omnibus(s, lambda);
  }
  throw std::invalid_argument("unknown test kind");
}

std::pair<double, double> wilson_ci(std::size_t hits, std::size_t M,
                                    double level) {
  if (M == 0) throw std::invalid_argument("wilson_ci: M must be >= 1");
  if (hits > M) throw std::invalid_argument("wilson_ci: hits must be <= M");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("wilson_ci: level must lie in (0, 1)");
  const double z = norm_quantile(0.5 + level / 2.0);
  const double m = static_cast<double>(M);
  const double ph = static_cast<double>(hits) / m;
  const double denom = 1.0 + z * z / m;
  const double centre = (ph + z * z / (2.0 * m)) / denom;
  const double half =
      z * std::sqrt(ph * (1.0 - ph) / m + z * z / (4.0 * m * m)) / denom;
  double lo = centre - half, hi = centre + half;
  if (hits == 0) lo = 0.0;
  if (hits == M) hi = 1.0;
  return {lo, hi};
}

std::vector<double> by_correction(const std::vector<double>& pvals) {
  const std::size_t m = pvals.size();
  for (std::size_t i = 0; i < m; ++i)
    if (!(pvals[i] >= 0.0 && pvals[i] <= 1.0))
      throw std::invalid_argument("by_correction: p-value " +
                                  std::to_string(i + 1) + " outside [0, 1]");
  if (m == 0) return {};

  double c = 0.0;
  for (std::size_t k = 1; k <= m; ++k) c += 1.0 / static_cast<double>(k);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pvals[a] > pvals[b];
  });

  std::vector<double> adj(m);
  double running = 1.0;
  for (std::size_t pos = 0; pos < m; ++pos) {
    const std::size_t i = order[pos];
    const double rank = static_cast<double>(m - pos);
    running = std::min(running, static_cast<double>(m) * c * pvals[i] / rank);
    adj[i] = std::min(1.0, running);
  }
  return adj;
}

std::vector<double> critical_values_two_sample(
    const ModelSpec& model, const std::vector<TestDescriptor>& tests,
    std::size_t n, std::size_t Mc, double alpha, std::uint64_t seed,
    unsigned threads) {
  model.validate();
  if (Mc < 50) throw std::invalid_argument("critical values: need Mc >= 50");
  if (tests.empty()) throw std::invalid_argument("critical values: no tests");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("critical values: alpha must lie in (0, 1)");

  std::vector<std::vector<double>> stats(tests.size(), std::vector<double>(Mc));
  run_replicates(Mc, threads, [&](std::size_t m) {
    Philox rng_a(seed, streams::kCriticalA + m);
    Philox rng_b(seed, streams::kCriticalB + m);
    const PairedSample sa = model.sample(n, rng_a);
    const PairedSample sb = model.sample(n, rng_b);
    const PairedSample cross(sa.theta1, sb.theta2);
    for (std::size_t t = 0; t < tests.size(); ++t)
      stats[t][m] = tests[t].statistic(cross);
  });

  const auto k = static_cast<std::size_t>(
      std::ceil(static_cast<double>(Mc) * (1.0 - alpha)));
  std::vector<double> crit(tests.size());
  for (std::size_t t = 0; t < tests.size(); ++t) {
    std::sort(stats[t].begin(), stats[t].end());
    crit[t] = stats[t][k - 1];
  }
  return crit;
}

double critical_value_two_sample(const ModelSpec& model,
                                 const TestDescriptor& test, std::size_t n,
                                 std::size_t Mc, double alpha,
                                 std::uint64_t seed, unsigned threads) {
  return critical_values_two_sample(model, {test}, n, Mc, alpha, seed,
                                    threads)[0];
}

PowerTable empirical_power(const BenchConfig& cfg) {
  validate_config(cfg);
  const std::size_t mc = cfg.Mc ? cfg.Mc : cfg.M;
  const std::size_t nt = cfg.tests.size();

  PowerTable table;
  table.model = cfg.model.name();
  table.n = cfg.n;
  table.M = cfg.M;
  table.alpha = cfg.alpha;
  table.calibration =
      cfg.calibration == Calibration::two_sample ? "two-sample" : "permutation";

  for (double g : cfg.grid) {
    const ModelSpec model = cfg.model.with_dependence(g);

    std::vector<double> crit;
    if (cfg.calibration == Calibration::two_sample)
      crit = critical_values_two_sample(model, cfg.tests, cfg.n, mc, cfg.alpha,
                                        cfg.seed, cfg.threads);

    std::vector<std::vector<std::uint8_t>> hit(
        nt, std::vector<std::uint8_t>(cfg.M, 0));
    run_replicates(cfg.M, cfg.threads, [&](std::size_t m) {
      Philox rng(cfg.seed, streams::kPowerRep + m);
      const PairedSample s = model.sample(cfg.n, rng);
      if (cfg.calibration == Calibration::two_sample) {
        for (std::size_t t = 0; t < nt; ++t)
          hit[t][m] = cfg.tests[t].statistic(s) > crit[t] ? 1 : 0;
      } else {
        // Fresh 64-bit seed for the inner permutation streams, derived from
        // the replicate's own stream so every (replicate, permutation) pair
        // is distinct.
        const std::uint64_t inner = rng.next_u64();
        for (std::size_t t = 0; t < nt; ++t)
          hit[t][m] =
              permutation_pvalue(cfg.tests[t], s, cfg.B, inner) < cfg.alpha
                  ? 1
                  : 0;
      }
    });

    for (std::size_t t = 0; t < nt; ++t) {
      PowerCell cell;
      cell.param = g;
      cell.test = cfg.tests[t].name();
      cell.M = cfg.M;
      cell.hits = 0;
      for (auto h : hit[t]) cell.hits += h;
      cell.rate = static_cast<double>(cell.hits) / static_cast<double>(cfg.M);
      const auto ci = wilson_ci(cell.hits, cfg.M, 0.95);
      cell.wilson_lo = ci.first;
      cell.wilson_hi = ci.second;
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

std::string to_csv(const PowerTable& table) {
  std::string out = "model,param,test,n,M,rate,wilson_lo,wilson_hi\n";
  for (const auto& c : table.cells) {
    out += csv_field(table.model);
    out += ',';
    out += fmt_g(c.param);
    out += ',';
    out += csv_field(c.test);
    out += ',';
    out += std::to_string(table.n);
    out += ',';
    out += std::to_string(c.M);
    out += ',';
    out += fmt_rate(c.rate);
    out += ',';
    out += fmt_rate(c.wilson_lo);
    out += ',';
    out += fmt_rate(c.wilson_hi);
    out += '\n';
  }
  return out;
}

std::string to_json(const PowerTable& table) {
  std::string out = "{\n";
  out += "  \"model\": \"" + table.model + "\",\n";
  out += "  \"n\": " + std::to_string(table.n) + ",\n";
  out += "  \"M\": " + std::to_string(table.M) + ",\n";
  out += "  \"alpha\": " + fmt_g(table.alpha) + ",\n";
  out += "  \"calibration\": \"" + table.calibration + "\",\n";
  out += "  \"cells\": [\n";
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    const auto& c = table.cells[i];
    out += "    {\"param\": " + fmt_g(c.param) + ", \"test\": \"" + c.test +
           "\", \"rate\": " + fmt_rate(c.rate) +
           ", \"wilson_lo\": " + fmt_rate(c.wilson_lo) +
           ", \"wilson_hi\": " + fmt_rate(c.wilson_hi) + "}";
    out += i + 1 < table.cells.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace torind
