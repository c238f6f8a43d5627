//
// Copyright 2026 The privfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "privfit/divergence_power.hpp"
#include "privfit/errors.hpp"
#include "privfit/gof_tests.hpp"
#include "privfit/io.hpp"
#include "privfit/mc_engine.hpp"
#include "privfit/noise_mechanisms.hpp"
#include "privfit/reference_tables.hpp"
#include "privfit/sharp_ld.hpp"

namespace privfit::cli {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("cannot parse number '" + item + "'");
    }
    if (used != item.size()) {
      throw ValidationError("cannot parse number '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

// A list summing to 1 is read as all k cells; otherwise as the k-1 free ones.
SimplexPoint parse_point(const std::string& text) {
  const std::vector<double> v = parse_list(text);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
      v.data(), static_cast<Eigen::Index>(v.size()));
  if (std::abs(x.sum() - 1.0) <= 1e-9) {
    Eigen::VectorXd full = x / x.sum();
    return SimplexPoint(full.head(full.size() - 1));
  }
  return SimplexPoint(x);
}

// Output sink: the given file when set, otherwise the command stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ValidationError("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in " + what + ": " + e.what());
  }
}

struct KernelFlags {
  std::string kind = "laplace";
  double eps = 0.1;
  int m = 0;
  std::string weights;
  std::string json_path;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "laplace, gaussian or custom");
    app->add_option("--eps", eps, "privacy scale epsilon");
    app->add_option("--m", m, "truncation radius");
    app->add_option("--weights", weights,
                    "custom kernel weights at l = -m..m, comma separated");
    app->add_option("--kernel", json_path, "kernel JSON file");
  }

  NoiseKernel build() const {
    if (!json_path.empty()) {
      return kernel_from_json(parse_json(read_file(json_path), json_path));
    }
    std::optional<std::vector<double>> w;
    if (!weights.empty()) w = parse_list(weights);
    return make_kernel(kernel_kind_from_string(kind), eps, m, std::move(w));
  }
};

void cmd_mech(const KernelFlags& flags, std::ostream& out, std::ostream& err) {
  const NoiseKernel kernel = flags.build();
  const PrivacyBudget budget = delta_of(kernel);
  out << "kind,epsilon,m,normalizer,variance,delta,dp_holds,worst_ratio,"
         "boundary_mass\n";
  out << to_string(kernel.kind()) << ',' << fmt(kernel.epsilon()) << ','
      << kernel.m() << ',' << fmt(kernel.normalizer()) << ','
      << fmt(kernel_variance(kernel)) << ',' << fmt(budget.delta) << ',';
  if (kernel.is_point_mass()) {
    err << "warning: m = 0 is the identity mechanism (delta = 1, no "
           "privacy)\n";
    out << "na,na,na\n";
    return;
  }
  const DpReport report = verify_dp(kernel);
  out << (report.holds ? "true" : "false") << ',' << fmt(report.worst_ratio)
      << ',' << fmt(report.boundary_mass) << '\n';
}

void cmd_table1(std::ostream& out) {
  out << "epsilon,delta,m_L,m_G,scenario,loss_L,loss_G\n";
  for (const ReferenceRow& row : reference_rows()) {
    const NoiseKernel lap = NoiseKernel::laplace(row.epsilon, row.m_laplace);
    const NoiseKernel gau = NoiseKernel::gaussian(row.epsilon, row.m_gaussian);
    for (const Scenario& s : reference_scenarios()) {
      const HypothesisPair pair = s.pair();
      out << fmt(row.epsilon) << ',' << fmt(row.delta) << ',' << row.m_laplace
          << ',' << row.m_gaussian << ',' << s.name << ','
          << fmt(power_loss(pair, lap).loss) << ','
          << fmt(power_loss(pair, gau).loss) << '\n';
    }
  }
}

void cmd_table2(std::ostream& out) {
  out << "epsilon,delta,m_L,m_G,var_L,var_G,delta_L,delta_G\n";
  for (const ReferenceRow& row : reference_rows()) {
    const NoiseKernel lap = NoiseKernel::laplace(row.epsilon, row.m_laplace);
    const NoiseKernel gau = NoiseKernel::gaussian(row.epsilon, row.m_gaussian);
    out << fmt(row.epsilon) << ',' << fmt(row.delta) << ',' << row.m_laplace
        << ',' << row.m_gaussian << ',' << fmt(kernel_variance(lap)) << ','
        << fmt(kernel_variance(gau)) << ',' << fmt(delta_of(lap).delta) << ','
        << fmt(delta_of(gau).delta) << '\n';
  }
}

void cmd_figure1(const std::string& kind, std::ostream& out) {
  const KernelKind k = kernel_kind_from_string(kind);
  out << "scenario,m,epsilon,loss\n";
  for (const Scenario& s : reference_scenarios()) {
    const HypothesisPair pair = s.pair();
    for (int m : kFigure1Radii) {
      for (double eps : figure1_epsilon_grid()) {
        out << s.name << ',' << m << ',' << fmt(eps) << ','
            << fmt(power_loss(pair, make_kernel(k, eps, m)).loss) << '\n';
      }
    }
  }
}

struct TestFlags {
  std::string table;
  std::string p0;
  double alpha = 0.05;
  std::string model = "true";
  std::string source = "chi2_limit";
  std::uint64_t seed = 1;
  std::int64_t mc_budget = 20000;
  bool naive_raw = false;
};

void cmd_test(const TestFlags& flags, const KernelFlags& kflags,
              std::ostream& out) {
  const NoiseKernel kernel = kflags.build();
  const std::string text = read_file(flags.table);
  const std::string header = text.substr(0, text.find('\n'));
  std::istringstream in(text);
  std::optional<PerturbedTable> b;
  bool perturbed_here = false;
  if (header.find("count") != std::string::npos) {
    const FrequencyTable a = read_frequency_table_csv(in);
    b = perturb(a, kernel, flags.seed);
    perturbed_here = true;
  } else {
    b = read_perturbed_table_csv(in);
  }
  const SimplexPoint p0 = parse_point(flags.p0);
  const TestConfig config{.alpha = flags.alpha,
                          .model = model_from_string(flags.model),
                          .source = critical_source_from_string(flags.source),
                          .mc_budget = flags.mc_budget,
                          .naive_on_raw = flags.naive_raw};
  const TestOutcome outcome = run_test(*b, kernel, p0, config, flags.seed);
  nlohmann::json j = outcome_to_json(outcome);
  j["perturbed_here"] = perturbed_here;
  j["released"] = b->values();
  out << j.dump(2) << '\n';
}

struct PairFlags {
  std::string p0;
  std::string p1;
  void attach(CLI::App* app) {
    app->add_option("--p0", p0, "null probabilities")->required();
    app->add_option("--p1", p1, "alternative probabilities")->required();
  }
  HypothesisPair build() const {
    return HypothesisPair(parse_point(p0), parse_point(p1));
  }
};

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (double x : v) j.push_back(round6(x));
  return j;
}

void cmd_power(const PairFlags& pflags, const KernelFlags& kflags,
               std::int64_t n, double alpha, double eta, std::ostream& out) {
  const HypothesisPair pair = pflags.build();
  const NoiseKernel kernel = kflags.build();
  const PowerLossReport report = power_loss(pair, kernel, eta);
  const PowerExponentPrediction pred =
      predicted_power_exponent(pair, kernel, n, alpha);
  nlohmann::json j = {{"schema", kSchema},
                      {"kl", round6(report.kl)},
                      {"kl_gradient", vector_json(report.kl_gradient)},
                      {"loss", round6(report.loss)},
                      {"per_coordinate_logmgf",
                       vector_json(report.per_coordinate_logmgf)},
                      {"eta", eta},
                      {"nu", report.nu},
                      {"n", n},
                      {"predicted_exponent", round6(pred.value)},
                      {"log_term", round6(pred.log_term)},
                      {"loss_term", round6(pred.loss_term)},
                      {"omits_higher_order_terms", true}};
  try {
    const LossBounds bounds = proposition_bounds(pair, kernel, eta);
    j["bounds"] = {{"regime", std::string(to_string(bounds.regime))},
                   {"bound", round6(bounds.bound)},
                   {"quadratic_loss", round6(bounds.quadratic_loss)}};
  } catch (const RegimeError& e) {
    j["bounds"] = {{"regime", nullptr}, {"note", e.what()}};
  }
  out << j.dump(2) << '\n';
}

void cmd_cost(const PairFlags& pflags, const KernelFlags& kflags,
              std::int64_t nbar, std::ostream& out) {
  const SampleCostReport r =
      sample_cost(pflags.build(), kflags.build(), nbar);
  const nlohmann::json j = {{"schema", kSchema},
                            {"nbar_plain", r.nbar_plain},
                            {"nbar_private_estimate", r.nbar_private_estimate},
                            {"cost", round6(r.cost)},
                            {"loss", round6(r.loss)},
                            {"kl", round6(r.kl)}};
  out << j.dump(2) << '\n';
}

void cmd_simulate(const std::string& plan_path, const std::string& mode,
                  const std::string& trials_csv, const std::string& t_grid,
                  std::ostream& out) {
  const SimPlan plan = plan_from_json(parse_json(read_file(plan_path), plan_path));
  if (mode == "null") {
    if (t_grid.empty()) throw ValidationError("--mode null needs --t-grid");
    nlohmann::json rows = nlohmann::json::array();
    for (const CdfPoint& c : simulate_null_cdf(plan, parse_list(t_grid))) {
      rows.push_back({{"t", c.t},
                      {"cdf", round6(c.cdf)},
                      {"stderr", round6(c.stderr_hat)}});
    }
    out << nlohmann::json{{"schema", kSchema}, {"null_cdf", rows}}.dump(2)
        << '\n';
    return;
  }
  if (mode != "power" && mode != "exponent") {
    throw ValidationError("--mode must be power, exponent or null");
  }
  const double cv = plan_critical_value(plan);
  const SimSummary s = mode == "power" ? estimate_power(plan, cv)
                                       : estimate_exponent(plan, cv);
  if (!trials_csv.empty()) {
    Sink sink(trials_csv, out);
    sink.get() << "trial,statistic,reject\n";
    const std::vector<double> stats = simulate_statistics(plan);
    for (std::size_t i = 0; i < stats.size(); ++i) {
      sink.get() << i << ',' << fmt(stats[i]) << ','
                 << (stats[i] > cv ? 1 : 0) << '\n';
    }
  }
  out << summary_to_json(s).dump(2) << '\n';
}

LatticeDistribution parse_dist(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string name = descriptor.substr(0, colon);
  if (name != "bernoulli" || colon == std::string::npos) {
    throw ValidationError("--dist must be bernoulli:<p>");
  }
  return LatticeDistribution::bernoulli(parse_list(descriptor.substr(colon + 1))[0])
      .centered();
}

void cmd_ldcheck(const std::string& dist_spec, double xi,
                 const std::string& ns, double lo, double hi,
                 std::ostream& out) {
  const LatticeDistribution dist = parse_dist(dist_spec);
  Eigen::VectorXd x(1);
  x << xi;
  const RegionSupportFn region = interval_region(lo, hi);
  out << "n,exact_log_prob,model_log_estimate,residual\n";
  for (double nd : parse_list(ns)) {
    const auto n = static_cast<std::int64_t>(nd);
    if (static_cast<double>(n) != nd || n < 1) {
      throw ValidationError("--n entries must be positive integers");
    }
    const double exact = exact_tail_log_probability(dist, xi, lo, hi, n);
    const double model =
        sharp_ld_estimate(dist, x, region, n).log_estimate_up_to_constant;
    out << n << ',' << fmt(exact) << ',' << fmt(model) << ','
        << fmt(exact - model) << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Differentially private goodness-of-fit testing toolkit"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("-o,--out", out_path, "write the report to this file");

  KernelFlags mech_kernel;
  auto* mech = app.add_subcommand("mech", "kernel report");
  mech_kernel.attach(mech);

  auto* table1 = app.add_subcommand("table1", "power-loss table (CSV)");
  auto* table2 = app.add_subcommand("table2", "kernel variance table (CSV)");
  std::string fig_kind = "laplace";
  auto* figure1 = app.add_subcommand("figure1", "loss curves over eps (CSV)");
  figure1->add_option("--kind", fig_kind, "laplace or gaussian");

  TestFlags test_flags;
  KernelFlags test_kernel;
  auto* test = app.add_subcommand("test", "run an LR goodness-of-fit test");
  test_kernel.attach(test);
  test->add_option("--table", test_flags.table,
                   "CSV with cell,count (raw) or cell,value (released)")
      ->required();
  test->add_option("--p0", test_flags.p0, "null probabilities")->required();
  test->add_option("--alpha", test_flags.alpha, "significance level");
  test->add_option("--model", test_flags.model, "true, naive or multinomial");
  test->add_option("--source", test_flags.source,
                   "chi2_limit, edgeworth_naive, monte_carlo or "
                   "exact_enumeration");
  test->add_option("--seed", test_flags.seed, "random seed");
  test->add_option("--mc-budget", test_flags.mc_budget,
                   "Monte Carlo draws for monte_carlo critical values");
  test->add_flag("--naive-raw", test_flags.naive_raw,
                 "naive statistic on the raw released table");

  PairFlags power_pair;
  KernelFlags power_kernel;
  std::int64_t power_n = 1000;
  double power_alpha = 0.05;
  double power_eta = 0.1;
  auto* power = app.add_subcommand("power", "power loss and exponent report");
  power_pair.attach(power);
  power_kernel.attach(power);
  power->add_option("--n", power_n, "sample size");
  power->add_option("--alpha", power_alpha, "significance level");
  power->add_option("--eta", power_eta, "large-scale threshold slack");

  PairFlags cost_pair;
  KernelFlags cost_kernel;
  std::int64_t nbar = 0;
  auto* cost = app.add_subcommand("cost", "sample cost of privacy");
  cost_pair.attach(cost);
  cost_kernel.attach(cost);
  cost->add_option("--nbar", nbar, "non-private sample size")->required();

  std::string plan_path, mode = "power", trials_csv, t_grid;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation");
  simulate->add_option("--plan", plan_path, "SimPlan JSON file")->required();
  simulate->add_option("--mode", mode, "power, exponent or null");
  simulate->add_option("--trials-csv", trials_csv, "per-trial CSV output");
  simulate->add_option("--t-grid", t_grid, "grid for --mode null");

  std::string dist_spec = "bernoulli:0.5", ld_ns = "100,200,400,800";
  double xi = 0.2, lo = 0.0, hi = 1.0;
  auto* ldcheck = app.add_subcommand("ldcheck", "sharp large-deviation check");
  ldcheck->add_option("--dist", dist_spec, "bernoulli:<p>, centered");
  ldcheck->add_option("--xi", xi, "tilt target");
  ldcheck->add_option("--n", ld_ns, "comma-separated sample sizes");
  ldcheck->add_option("--lo", lo, "region lower edge");
  ldcheck->add_option("--hi", hi, "region upper edge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    Sink sink(out_path, out);
    std::ostream& o = sink.get();
    if (*mech) cmd_mech(mech_kernel, o, err);
    if (*table1) cmd_table1(o);
    if (*table2) cmd_table2(o);
    if (*figure1) cmd_figure1(fig_kind, o);
    if (*test) cmd_test(test_flags, test_kernel, o);
    if (*power) cmd_power(power_pair, power_kernel, power_n, power_alpha,
                          power_eta, o);
    if (*cost) cmd_cost(cost_pair, cost_kernel, nbar, o);
    if (*simulate) cmd_simulate(plan_path, mode, trials_csv, t_grid, o);
    if (*ldcheck) cmd_ldcheck(dist_spec, xi, ld_ns, lo, hi, o);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace privfit::cli
