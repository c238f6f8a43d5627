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

#include "privfit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "privfit/errors.hpp"

namespace privfit {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw ValidationError("line " + std::to_string(line) + ": " + what);
}

Count parse_integer(const std::string& text, int line) {
  Count value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    fail_at(line, "expected an integer, got '" + text + "'");
  }
  return value;
}

template <typename T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ValidationError(std::string("missing JSON field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad JSON field '") + key +
                          "': " + e.what());
  }
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(round6(*v)) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return require<double>(j, key);
}

}  // namespace

std::vector<Count> read_cells_csv(std::istream& in, std::string_view column) {
  std::string line_text;
  int line = 0;
  bool header = false;
  std::vector<Count> values;
  while (std::getline(in, line_text)) {
    ++line;
    const std::string text = trim(line_text);
    if (text.empty()) continue;
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      fail_at(line, "expected exactly two comma-separated fields");
    }
    const std::string first = trim(text.substr(0, comma));
    const std::string second = trim(text.substr(comma + 1));
    if (!header) {
      if (first != "cell" || second != column) {
        fail_at(line, "expected header 'cell," + std::string(column) + "'");
      }
      header = true;
      continue;
    }
    const Count cell = parse_integer(first, line);
    if (cell != static_cast<Count>(values.size()) + 1) {
      fail_at(line, "cells must be numbered 1..k in order");
    }
    values.push_back(parse_integer(second, line));
  }
  if (!header) throw ValidationError("line 1: empty table");
  return values;
}

FrequencyTable read_frequency_table_csv(std::istream& in) {
  return FrequencyTable(read_cells_csv(in, "count"));
}

PerturbedTable read_perturbed_table_csv(std::istream& in) {
  return PerturbedTable(read_cells_csv(in, "value"));
}

void write_cells_csv(std::ostream& out, std::string_view column,
                     const std::vector<Count>& values) {
  out << "cell," << column << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i + 1 << ',' << values[i] << '\n';
  }
}

void write_frequency_table_csv(std::ostream& out, const FrequencyTable& table) {
  write_cells_csv(out, "count", table.counts());
}

void write_perturbed_table_csv(std::ostream& out, const PerturbedTable& b) {
  write_cells_csv(out, "value", b.values());
}

void write_post_processed_csv(std::ostream& out, const PostProcessedTable& b) {
  write_cells_csv(out, "value", b.values());
}

double round6(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return std::strtod(buf, nullptr);
}

nlohmann::json kernel_to_json(const NoiseKernel& kernel) {
  nlohmann::json j = {{"kind", std::string(to_string(kernel.kind()))},
                      {"epsilon", kernel.epsilon()},
                      {"m", kernel.m()}};
  if (kernel.kind() == KernelKind::kCustom) {
    j["weights"] = std::vector<double>(kernel.weights().begin(),
                                       kernel.weights().end());
  }
  return j;
}

NoiseKernel kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("kernel JSON must be an object");
  const KernelKind kind =
      kernel_kind_from_string(require<std::string>(j, "kind"));
  const double epsilon = require<double>(j, "epsilon");
  std::optional<std::vector<double>> weights;
  if (j.contains("weights")) {
    weights = require<std::vector<double>>(j, "weights");
  }
  int m = 0;
  if (j.contains("m")) {
    m = require<int>(j, "m");
  } else if (weights) {
    m = static_cast<int>(weights->size() / 2);
  } else {
    throw ValidationError("missing JSON field 'm'");
  }
  return make_kernel(kind, epsilon, m, std::move(weights));
}

nlohmann::json simplex_to_json(const SimplexPoint& p) {
  return std::vector<double>(p.probs().begin(), p.probs().end());
}

SimplexPoint simplex_from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw ValidationError("simplex point must be a JSON array");
  }
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad simplex point: ") + e.what());
  }
  return SimplexPoint(Eigen::Map<const Eigen::VectorXd>(
      v.data(), static_cast<Eigen::Index>(v.size())));
}

nlohmann::json outcome_to_json(const TestOutcome& outcome) {
  nlohmann::json mle;
  for (double x : outcome.mle.probs()) mle.push_back(round6(x));
  return {{"schema", kSchema},
          {"statistic", round6(outcome.statistic)},
          {"critical_value", round6(outcome.critical_value)},
          {"reject", outcome.reject},
          {"df", outcome.df},
          {"model", std::string(to_string(outcome.model))},
          {"source", std::string(to_string(outcome.source))},
          {"achieved_level", optional_number(outcome.achieved_level)},
          {"naive_on_raw", outcome.naive_on_raw},
          {"mle", mle}};
}

nlohmann::json plan_to_json(const SimPlan& plan) {
  return {{"schema", kSchema},
          {"trials", plan.trials},
          {"seed", plan.seed},
          {"n", plan.n},
          {"truth", simplex_to_json(plan.truth)},
          {"p0", simplex_to_json(plan.p0)},
          {"kernel", kernel_to_json(plan.kernel)},
          {"model", std::string(to_string(plan.model))},
          {"alpha", plan.alpha},
          {"critical_value", plan.critical_value
                                 ? nlohmann::json(*plan.critical_value)
                                 : nlohmann::json(nullptr)},
          {"critical_source", std::string(to_string(plan.critical_source))},
          {"workers", plan.workers}};
}

SimPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("plan JSON must be an object");
  if (!j.contains("truth") || !j.contains("p0") || !j.contains("kernel")) {
    throw ValidationError("plan JSON needs 'truth', 'p0' and 'kernel'");
  }
  SimPlan plan{.trials = require<std::int64_t>(j, "trials"),
               .seed = j.contains("seed") ? require<std::uint64_t>(j, "seed")
                                          : 0,
               .n = require<Count>(j, "n"),
               .truth = simplex_from_json(j.at("truth")),
               .kernel = kernel_from_json(j.at("kernel")),
               .model = j.contains("model")
                            ? model_from_string(require<std::string>(j, "model"))
                            : Model::kTrue,
               .p0 = simplex_from_json(j.at("p0")),
               .alpha = j.contains("alpha") ? require<double>(j, "alpha")
                                            : 0.05,
               .critical_value = read_optional(j, "critical_value"),
               .critical_source =
                   j.contains("critical_source")
                       ? critical_source_from_string(
                             require<std::string>(j, "critical_source"))
                       : CriticalSource::kChi2Limit,
               .workers = j.contains("workers") ? require<int>(j, "workers")
                                                : 1};
  if (plan.trials < 1) throw ValidationError("trials must be >= 1");
  if (plan.n < 1) throw ValidationError("n must be >= 1");
  if (plan.truth.k() != plan.p0.k()) {
    throw ValidationError("truth and p0 must have the same number of cells");
  }
  return plan;
}

nlohmann::json summary_to_json(const SimSummary& s) {
  return {{"schema", kSchema},
          {"power_hat", round6(s.power_hat)},
          {"stderr", round6(s.stderr_hat)},
          {"ci_low", round6(s.ci_low)},
          {"ci_high", round6(s.ci_high)},
          {"rejections", s.rejections},
          {"trials_used", s.trials_used},
          {"critical_value", round6(s.critical_value)},
          {"exponent_hat", optional_number(s.exponent_hat)},
          {"exponent_stderr", optional_number(s.exponent_stderr)},
          {"exponent_ci_low", optional_number(s.exponent_ci_low)},
          {"exponent_ci_high", optional_number(s.exponent_ci_high)},
          {"saturated", s.saturated}};
}

SimSummary summary_from_json(const nlohmann::json& j) {
  SimSummary s;
  s.power_hat = require<double>(j, "power_hat");
  s.stderr_hat = require<double>(j, "stderr");
  s.ci_low = require<double>(j, "ci_low");
  s.ci_high = require<double>(j, "ci_high");
  s.rejections = require<std::int64_t>(j, "rejections");
  s.trials_used = require<std::int64_t>(j, "trials_used");
  s.critical_value = require<double>(j, "critical_value");
  s.exponent_hat = read_optional(j, "exponent_hat");
  s.exponent_stderr = read_optional(j, "exponent_stderr");
  s.exponent_ci_low = read_optional(j, "exponent_ci_low");
  s.exponent_ci_high = read_optional(j, "exponent_ci_high");
  s.saturated = require<bool>(j, "saturated");
  return s;
}

}  // namespace privfit
