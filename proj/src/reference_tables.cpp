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

#include "privfit/reference_tables.hpp"

namespace privfit {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows = {
      {0.025, 0.09, 5, 5, 9.660, 9.824,
       {8.652, 0.698, 17.303, 11.773}, {8.674, 0.707, 17.349, 11.796}},
      {0.025, 0.04, 10, 10, 34.288, 35.411,
       {18.927, 2.037, 37.854, 25.228}, {18.972, 2.069, 37.944, 25.274}},
      {0.05, 0.08, 5, 5, 9.650, 9.324,
       {8.596, 0.6789, 17.191, 11.715}, {8.642, 0.697, 17.284, 11.762}},
      {0.05, 0.04, 10, 10, 31.965, 34.187,
       {18.802, 1.962, 37.605, 25.101}, {18.899, 2.029, 37.795, 25.197}},
      {0.075, 0.08, 5, 5, 8.991, 9.478,
       {8.538, 0.660, 17.076, 11.656}, {8.610, 0.687, 17.219, 11.729}},
      {0.075, 0.03, 10, 11, 29.711, 39.189,
       {18.672, 1.885, 37.345, 24.970}, {20.902, 2.281, 41.803, 27.836}},
      {0.1, 0.07, 5, 6, 8.662, 12.850,
       {8.479, 0.641, 16.958, 11.595}, {10.573, 0.903, 21.147, 14.327}},
      {0.1, 0.03, 10, 12, 27.541, 43.925,
       {18.536, 1.807, 37.073, 24.833}, {22.893, 2.525, 45.786, 30.462}},
      {0.125, 0.07, 5, 6, 8.337, 12.574,
       {8.419, 0.622, 16.837, 11.533}, {10.531, 0.888, 21.063, 14.283}},
      {0.125, 0.02, 10, 12, 25.465, 42.084,
       {18.396, 1.727, 36.792, 24.690}, {22.795, 2.470, 45.591, 30.362}},
      {0.15, 0.06, 5, 6, 8.019, 12.303,
       {8.357, 0.603, 16.713, 11.469}, {10.489, 0.874, 20.978, 14.240}},
      {0.15, 0.02, 10, 12, 23.493, 40.317,
       {18.250, 1.646, 36.499, 24.542}, {22.696, 2.414, 45.391, 30.261}},
      {0.175, 0.06, 5, 6, 7.706, 12.037,
       {8.293, 0.584, 16.587, 11.404}, {10.446, 0.859, 20.892, 14.195}},
      {0.175, 0.02, 10, 12, 21.631, 38.624,
       {18.098, 1.565, 36.197, 24.389}, {22.595, 2.358, 45.189, 30.158}},
      {0.2, 0.05, 5, 6, 7.399, 11.776,
       {8.228, 0.565, 16.457, 11.337}, {10.403, 0.845, 20.801, 14.150}},
      {0.2, 0.02, 10, 13, 19.884, 42.001,
       {17.942, 1.483, 35.884, 24.231}, {24.536, 2.566, 49.072, 32.734}},
  };
  return rows;
}

HypothesisPair Scenario::pair() const {
  return HypothesisPair(SimplexPoint::from_full(p0), SimplexPoint::from_full(p1));
}

const std::vector<Scenario>& reference_scenarios() {
  static const std::vector<Scenario> scenarios = {
      {"U_vs_0.1", vec({0.5, 0.5}), vec({0.1, 0.9})},
      {"U_vs_0.4", vec({0.5, 0.5}), vec({0.4, 0.6})},
      {"U_vs_0.45_0.45_0.05", vec({0.25, 0.25, 0.25, 0.25}),
       vec({0.45, 0.45, 0.05, 0.05})},
      {"U_vs_0.85_0.05_0.05", vec({0.25, 0.25, 0.25, 0.25}),
       vec({0.85, 0.05, 0.05, 0.05})},
  };
  return scenarios;
}

std::vector<double> figure1_epsilon_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.005 * i);
  return grid;
}

}  // namespace privfit
