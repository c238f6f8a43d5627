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

// CSV tables and JSON reports.
//
// Tables are CSV with a header row and one row per cell numbered from 1:
//   cell,count   raw frequency tables
//   cell,value   perturbed or post-processed tables
// JSON reports carry "schema": "privfit/1".

#ifndef PRIVFIT_IO_HPP_
#define PRIVFIT_IO_HPP_

#include <iosfwd>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "privfit/gof_tests.hpp"
#include "privfit/mc_engine.hpp"
#include "privfit/noise_mechanisms.hpp"
#include "privfit/types.hpp"

namespace privfit {

inline constexpr std::string_view kSchema = "privfit/1";

// Reads cells 1..k in order. Parse errors raise ValidationError naming the
// offending line.
std::vector<Count> read_cells_csv(std::istream& in, std::string_view column);
FrequencyTable read_frequency_table_csv(std::istream& in);
PerturbedTable read_perturbed_table_csv(std::istream& in);

void write_cells_csv(std::ostream& out, std::string_view column,
                     const std::vector<Count>& values);
void write_frequency_table_csv(std::ostream& out, const FrequencyTable& table);
void write_perturbed_table_csv(std::ostream& out, const PerturbedTable& b);
void write_post_processed_csv(std::ostream& out, const PostProcessedTable& b);

// x rounded to 6 significant digits.
double round6(double x);

nlohmann::json kernel_to_json(const NoiseKernel& kernel);
NoiseKernel kernel_from_json(const nlohmann::json& j);

// JSON array of the k-1 free probabilities.
nlohmann::json simplex_to_json(const SimplexPoint& p);
SimplexPoint simplex_from_json(const nlohmann::json& j);

nlohmann::json outcome_to_json(const TestOutcome& outcome);

nlohmann::json plan_to_json(const SimPlan& plan);
SimPlan plan_from_json(const nlohmann::json& j);

nlohmann::json summary_to_json(const SimSummary& summary);
SimSummary summary_from_json(const nlohmann::json& j);

}  // namespace privfit

#endif  // PRIVFIT_IO_HPP_
