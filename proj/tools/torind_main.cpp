// torind: trigonometric-moment independence tests for toroidal data.
//
// Subcommands:
//   test    run an independence-test battery on a two-column angle CSV
//   sample  draw from one of the four toroidal alternative models
//   bench   Monte Carlo size/power table from a JSON config
//   adjust  append a Benjamini-Yekutieli column to a p-value CSV
//
// Exit codes: 0 success, 1 usage/validation error, 2 numerical failure.

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torind/angles.hpp"
#include "torind/bench.hpp"
#include "torind/cosine_test.hpp"
#include "torind/models.hpp"
#include "torind/multi_test.hpp"
#include "torind/omnibus.hpp"
#include "torind/types.hpp"

using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ------------------------------------------------------------------ helpers

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

struct Csv {
  std::vector<std::string> header;       // empty if none detected
  std::vector<std::vector<double>> rows; // numeric cells
  std::vector<std::size_t> line_no;      // 1-based source line per row
};

// Comma-separated, UTF-8, '.' decimals; a non-numeric first row is a header.
// Every data cell must parse as a finite double.
Csv parse_csv(const std::string& text) {
  Csv csv;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
  std::size_t ln = 0;
  for (const auto& raw : split(text, '\n')) {
    ++ln;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    lines.emplace_back(ln, split(line, ','));
  }
  if (lines.empty()) throw std::invalid_argument("input is empty");

  std::size_t start = 0;
  {
    bool numeric = true;
    double v;
    for (const auto& cell : lines[0].second)
      if (!parse_double(cell, v)) numeric = false;
    if (!numeric) {
      for (const auto& cell : lines[0].second) csv.header.push_back(trim(cell));
      start = 1;
    }
  }
  const std::size_t width =
      csv.header.empty() ? lines[0].second.size() : csv.header.size();
  for (std::size_t i = start; i < lines.size(); ++i) {
    const auto& [no, cells] = lines[i];
    if (cells.size() != width)
      throw std::invalid_argument("line " + std::to_string(no) + ": expected " +
                                  std::to_string(width) + " columns, got " +
                                  std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!parse_double(cells[c], row[c]))
        throw std::invalid_argument("line " + std::to_string(no) + ", column " +
                                    std::to_string(c + 1) +
                                    ": not a number: '" + trim(cells[c]) + "'");
    csv.rows.push_back(std::move(row));
    csv.line_no.push_back(no);
  }
  return csv;
}

std::string num_str(double v) { return ordered_json(v).dump(); }

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << content;
}

ordered_json result_json(const torind::TestResult& r) {
  ordered_json j;
  j["test"] = r.test;
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["method"] = r.method;
  j["df_or_B"] = r.df_or_B;
  j["n"] = r.n;
  ordered_json p;
  for (const auto& [k, v] : r.params) p[k] = v;
  j["params"] = p;
  return j;
}

std::pair<int, int> parse_pair(const std::string& text, const char* what) {
  const auto parts = split(trim(text), ',');
  if (parts.size() != 2)
    throw std::invalid_argument(std::string(what) + ": expected 'r1,r2', got '" +
                                text + "'");
  try {
    std::size_t used = 0;
    const int a = std::stoi(trim(parts[0]), &used);
    if (used != trim(parts[0]).size()) throw std::invalid_argument("");
    const int b = std::stoi(trim(parts[1]), &used);
    if (used != trim(parts[1]).size()) throw std::invalid_argument("");
    return {a, b};
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) +
                                ": could not parse integer pair '" + text + "'");
  }
}

torind::MultiOrderSpec parse_multi(const std::string& text) {
  torind::MultiOrderSpec spec;
  const auto halves = split(text, '|');
  if (halves.size() > 2)
    throw std::invalid_argument("--multi: at most one '|' separator");
  for (const auto& p : split(halves[0], ';'))
    if (!trim(p).empty()) spec.rc.push_back(parse_pair(p, "--multi"));
  if (halves.size() == 2)
    for (const auto& p : split(halves[1], ';'))
      if (!trim(p).empty()) spec.rs.push_back(parse_pair(p, "--multi"));
  if (spec.dim() == 0)
    throw std::invalid_argument("--multi: no frequency pairs given");
  return spec;
}

// --------------------------------------------------------------------- test

struct TestOpts {
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t col1 = 1, col2 = 2;
  long lag = -1;
  bool degrees = false;
  bool axial = false;
  bool no_center = false;
  bool timestamp = false;
  std::size_t B = 10000;
  std::vector<std::string> cosine;
  std::vector<std::string> multi;
  std::vector<double> omnibus;
};

std::vector<double> extract_column(const Csv& csv, std::size_t col,
                                   const TestOpts& o) {
  if (col == 0 || (!csv.rows.empty() && col > csv.rows[0].size()))
    throw std::invalid_argument("column index " + std::to_string(col) +
                                " out of range");
  std::vector<double> v;
  v.reserve(csv.rows.size());
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    double x = csv.rows[i][col - 1];
    try {
      if (o.degrees) x *= torind::kPi / 180.0;
      if (o.axial) x = torind::axial_to_circular(x);
      v.push_back(torind::wrap_angle(x));
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(csv.line_no[i]) +
                                  ": " + e.what());
    }
  }
  return v;
}

int cmd_test(const TestOpts& o, const std::string& argv_echo) {
  const std::string bytes = read_input(o.input);
  const Csv csv = parse_csv(bytes);

  torind::PairedSample sample;
  if (o.lag >= 0) {
    if (o.lag < 1)
      throw std::invalid_argument("--lag must be >= 1 (got " +
                                  std::to_string(o.lag) + ")");
    const auto series = extract_column(csv, o.col1, o);
    sample = torind::lag_pairs(series, static_cast<std::size_t>(o.lag));
  } else {
    sample = torind::PairedSample(extract_column(csv, o.col1, o),
                                  extract_column(csv, o.col2, o));
  }
  if (sample.size() < 2)
    throw std::invalid_argument("need at least 2 paired observations, got " +
                                std::to_string(sample.size()));

  // Battery: explicit flags, or the default five-test battery.
  std::vector<torind::FrequencyPair> cosines;
  std::vector<torind::MultiOrderSpec> multis;
  std::vector<double> lambdas;
  for (const auto& c : o.cosine) {
    const auto [r1, r2] = parse_pair(c, "--cosine");
    cosines.push_back({r1, r2});
  }
  for (const auto& mtext : o.multi) multis.push_back(parse_multi(mtext));
  lambdas = o.omnibus;
  if (cosines.empty() && multis.empty() && lambdas.empty()) {
    cosines = {{1, 1}, {1, -1}};
    multis.push_back(torind::MultiOrderSpec{{{1, -1}, {1, 1}}, {}});
    lambdas = {0.1, 1.0};
  }

  std::vector<torind::TestResult> results;
  for (const auto& f : cosines)
    results.push_back(torind::cosine_test(sample, f, !o.no_center));
  for (const auto& m : multis)
    results.push_back(torind::multi_test(sample, m, !o.no_center));
  for (double lam : lambdas) {
    torind::PermutationPlan plan;
    plan.B = o.B;
    plan.seed = o.seed;
    plan.threads = o.threads;
    results.push_back(torind::permutation_test(sample, lam, plan));
  }

  ordered_json j;
  j["command"] = "test";
  j["argv"] = argv_echo;
  j["input"] = o.input;
  j["input_digest"] = fnv1a_digest(bytes);
  j["seed"] = o.seed;
  j["version"] = kVersion;
  if (o.timestamp) {
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["timestamp"] = buf;
  }
  ordered_json opts;
  opts["col1"] = o.col1;
  opts["col2"] = o.col2;
  if (o.lag >= 0) opts["lag"] = o.lag;
  opts["degrees"] = o.degrees;
  opts["axial"] = o.axial;
  opts["center"] = !o.no_center;
  opts["B"] = o.B;
  j["options"] = opts;
  j["n"] = sample.size();
  ordered_json tests = ordered_json::array();
  for (const auto& r : results) tests.push_back(result_json(r));
  j["tests"] = tests;

  write_output(o.out, j.dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------------- sample

struct SampleOpts {
  std::string model;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
  double p = 0.0;
  double rho1 = 0.0, rho2 = 0.0, rho = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;
  std::string interaction = "positive";
  double mug = 0.0, kappag = 0.0;
};

int cmd_sample(const SampleOpts& o) {
  if (o.n == 0) throw std::invalid_argument("sample: n must be >= 1");

  torind::PairedSample s;
  std::string label;
  if (o.model == "pb") {
    s = torind::sample_pb(o.n, o.p, o.seed);
    label = "pb p=" + num_str(o.p);
  } else if (o.model == "bwc") {
    s = torind::sample_bwc(o.n, o.rho1, o.rho2, o.rho, o.seed);
    label = "bwc rho1=" + num_str(o.rho1) + " rho2=" + num_str(o.rho2) +
            " rho=" + num_str(o.rho);
  } else if (o.model == "bcvm") {
    torind::Interaction inter;
    if (o.interaction == "positive" || o.interaction == "pos")
      inter = torind::Interaction::positive;
    else if (o.interaction == "negative" || o.interaction == "neg")
      inter = torind::Interaction::negative;
    else
      throw std::invalid_argument(
          "sample: --interaction must be positive|negative");
    s = torind::sample_bcvm(o.n, o.kappa1, o.kappa2, o.kappa3, inter, o.seed);
    label = "bcvm kappa1=" + num_str(o.kappa1) + " kappa2=" + num_str(o.kappa2) +
            " kappa3=" + num_str(o.kappa3) + " interaction=" + o.interaction;
  } else if (o.model == "bvm") {
    s = torind::sample_bvm(o.n, o.kappa1, o.kappa2, o.mug, o.kappag, o.seed);
    label = "bvm kappa1=" + num_str(o.kappa1) + " kappa2=" + num_str(o.kappa2) +
            " mug=" + num_str(o.mug) + " kappag=" + num_str(o.kappag);
  } else {
    throw std::invalid_argument("sample: --model must be pb|bwc|bcvm|bvm");
  }

  std::string out = "theta1[" + label + "],theta2[" + label + "]\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += num_str(s.theta1[i]) + "," + num_str(s.theta2[i]) + "\n";
  write_output(o.out, out);
  return 0;
}

// -------------------------------------------------------------------- bench

torind::ModelSpec model_from_json(const ordered_json& j) {
  if (!j.contains("kind"))
    throw std::invalid_argument("config: missing key 'model.kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const auto num = [&](const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
  };
  if (kind == "pb") return torind::ModelSpec::pb(num("p", 0.0));
  if (kind == "bwc")
    return torind::ModelSpec::bwc(num("rho1", 0.0), num("rho2", 0.0),
                                  num("rho", 0.0));
  if (kind == "bcvm") {
    torind::Interaction inter = torind::Interaction::positive;
    if (j.contains("interaction")) {
      const std::string s = j.at("interaction").get<std::string>();
      if (s == "negative" || s == "neg")
        inter = torind::Interaction::negative;
      else if (s != "positive" && s != "pos")
        throw std::invalid_argument(
            "config: model.interaction must be positive|negative");
    }
    return torind::ModelSpec::bcvm(num("kappa1", 0.0), num("kappa2", 0.0),
                                   num("kappa3", 0.0), inter);
  }
  if (kind == "bvm")
    return torind::ModelSpec::bvm(num("kappa1", 0.0), num("kappa2", 0.0),
                                  num("mug", 0.0), num("kappag", 0.0));
  throw std::invalid_argument("config: model.kind must be pb|bwc|bcvm|bvm");
}

torind::TestDescriptor test_from_json(const ordered_json& j, std::size_t i) {
  const std::string ctx = "config: tests[" + std::to_string(i) + "]";
  if (!j.contains("type"))
    throw std::invalid_argument(ctx + ": missing key 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "cosine") {
    if (!j.contains("r1") || !j.contains("r2"))
      throw std::invalid_argument(ctx + ": cosine test needs 'r1' and 'r2'");
    return torind::TestDescriptor::cosine(j.at("r1").get<int>(),
                                          j.at("r2").get<int>());
  }
  if (type == "multi") {
    torind::MultiOrderSpec spec;
    if (j.contains("rc"))
      for (const auto& pair : j.at("rc"))
        spec.rc.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    if (j.contains("rs"))
      for (const auto& pair : j.at("rs"))
        spec.rs.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    if (spec.dim() == 0)
      throw std::invalid_argument(ctx + ": multi test needs 'rc' or 'rs'");
    return torind::TestDescriptor::multi(std::move(spec));
  }
  if (type == "omnibus") {
    if (!j.contains("lambda"))
      throw std::invalid_argument(ctx + ": omnibus test needs 'lambda'");
    return torind::TestDescriptor::omnibus(j.at("lambda").get<double>());
  }
  throw std::invalid_argument(ctx + ": type must be cosine|multi|omnibus");
}

struct BenchOpts {
  std::string config;
  std::string out_prefix;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int cmd_bench(const BenchOpts& o) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_input(o.config));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  for (const char* key : {"model", "grid", "n", "M", "tests"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("config: missing key '") + key +
                                  "'");

  torind::BenchConfig cfg;
  cfg.model = model_from_json(j.at("model"));
  cfg.grid = j.at("grid").get<std::vector<double>>();
  cfg.n = j.at("n").get<std::size_t>();
  cfg.M = j.at("M").get<std::size_t>();
  if (j.contains("Mc")) cfg.Mc = j.at("Mc").get<std::size_t>();
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("B")) cfg.B = j.at("B").get<std::size_t>();
  if (j.contains("calibration")) {
    const std::string c = j.at("calibration").get<std::string>();
    if (c == "two-sample")
      cfg.calibration = torind::Calibration::two_sample;
    else if (c == "permutation")
      cfg.calibration = torind::Calibration::permutation;
    else
      throw std::invalid_argument(
          "config: calibration must be two-sample|permutation");
  }
  const auto& tests = j.at("tests");
  for (std::size_t i = 0; i < tests.size(); ++i)
    cfg.tests.push_back(test_from_json(tests[i], i));
  if (o.seed) cfg.seed = *o.seed;
  cfg.threads = o.threads;

  const torind::PowerTable table = torind::empirical_power(cfg);

  std::string prefix = o.out_prefix;
  if (prefix.empty()) {
    prefix = o.config;
    if (prefix.size() > 5 && prefix.substr(prefix.size() - 5) == ".json")
      prefix = prefix.substr(0, prefix.size() - 5);
  }
  write_output(prefix + ".csv", torind::to_csv(table));
  write_output(prefix + ".json", torind::to_json(table));
  std::cout << "wrote " << prefix << ".csv\nwrote " << prefix << ".json\n";
  return 0;
}

// ------------------------------------------------------------------- adjust

int cmd_adjust(const std::string& input, const std::string& out) {
  const Csv csv = parse_csv(read_input(input));
  if (!csv.rows.empty() && csv.rows[0].size() != 1)
    throw std::invalid_argument("adjust: expected a single p-value column, got " +
                                std::to_string(csv.rows[0].size()));
  if (csv.rows.empty()) throw std::invalid_argument("adjust: no p-values");

  std::vector<double> p(csv.rows.size());
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    p[i] = csv.rows[i][0];
    if (!(p[i] >= 0.0 && p[i] <= 1.0))
      throw std::invalid_argument("line " + std::to_string(csv.line_no[i]) +
                                  ": p-value outside [0, 1]: " + num_str(p[i]));
  }
  const std::vector<double> adj = torind::by_correction(p);

  std::string text;
  if (!csv.header.empty()) text = csv.header[0] + ",by_adjusted\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    text += num_str(p[i]) + "," + num_str(adj[i]) + "\n";
  write_output(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trigonometric-moment independence tests for toroidal data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string argv_echo;
  for (int i = 0; i < argc; ++i) {
    if (i) argv_echo += ' ';
    argv_echo += argv[i];
  }

  // test
  TestOpts t;
  auto* test = app.add_subcommand("test", "run an independence-test battery");
  test->add_option("input", t.input, "two-column angle CSV ('-' for stdin)")
      ->required();
  test->add_option("--col1", t.col1, "first angle column (1-based)");
  test->add_option("--col2", t.col2, "second angle column (1-based)");
  test->add_option("--lag", t.lag,
                   "pair column col1 with itself at this lag (>= 1)");
  test->add_flag("--degrees", t.degrees, "input angles are in degrees");
  test->add_flag("--axial", t.axial, "axial data: double angles (in [0, pi))");
  test->add_flag("--no-center", t.no_center,
                 "skip marginal circular-mean centring");
  test->add_flag("--timestamp", t.timestamp, "include a UTC timestamp");
  test->add_option("--cosine", t.cosine, "cosine test frequency pair 'r1,r2'");
  test->add_option("--multi", t.multi,
                   "multi-order spec 'r1,r2;...[|r1,r2;...]' (cos|sin parts)");
  test->add_option("--omnibus", t.omnibus, "omnibus test at this lambda");
  test->add_option("--B", t.B, "permutation count for omnibus tests");
  test->add_option("--seed", t.seed, "RNG seed");
  test->add_option("--threads", t.threads, "worker threads (0 = auto)");
  test->add_option("--out", t.out, "output JSON path (default stdout)");

  // sample
  SampleOpts s;
  auto* sample = app.add_subcommand("sample", "draw from a toroidal model");
  sample->add_option("--model", s.model, "pb|bwc|bcvm|bvm")->required();
  sample->add_option("-n,--n", s.n, "sample size")->required();
  sample->add_option("--seed", s.seed, "RNG seed");
  sample->add_option("--p", s.p, "pb: mixing weight in [0,1]");
  sample->add_option("--rho1", s.rho1, "bwc: first margin concentration");
  sample->add_option("--rho2", s.rho2, "bwc: second margin concentration");
  sample->add_option("--rho", s.rho, "bwc: dependence in (-1,1)");
  sample->add_option("--kappa1", s.kappa1, "bcvm/bvm: first concentration");
  sample->add_option("--kappa2", s.kappa2, "bcvm/bvm: second concentration");
  sample->add_option("--kappa3", s.kappa3, "bcvm: interaction strength");
  sample->add_option("--interaction", s.interaction,
                     "bcvm: positive|negative interaction");
  sample->add_option("--mug", s.mug, "bvm: link mean direction");
  sample->add_option("--kappag", s.kappag, "bvm: link concentration");
  sample->add_option("--out", s.out, "output CSV path (default stdout)");

  // bench
  BenchOpts b;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Monte Carlo power table");
  bench->add_option("config", b.config, "BenchConfig JSON path")->required();
  bench->add_option("--out-prefix", b.out_prefix,
                    "output path prefix (default: config path minus .json)");
  auto* bs = bench->add_option("--seed", bench_seed, "override config seed");
  bench->add_option("--threads", b.threads, "worker threads (0 = auto)");

  // adjust
  std::string adj_in, adj_out;
  auto* adjust =
      app.add_subcommand("adjust", "Benjamini-Yekutieli adjust p-values");
  adjust->add_option("input", adj_in, "single-column p-value CSV")->required();
  adjust->add_option("--out", adj_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*test) return cmd_test(t, argv_echo);
    if (*sample) return cmd_sample(s);
    if (*bench) {
      if (bs->count()) b.seed = bench_seed;
      return cmd_bench(b);
    }
    if (*adjust) return cmd_adjust(adj_in, adj_out);
  } catch (const torind::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
