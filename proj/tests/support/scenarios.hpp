// Copyright 2026 The ef Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EF_TESTS_SUPPORT_SCENARIOS_HPP_
#define EF_TESTS_SUPPORT_SCENARIOS_HPP_

#include <cstdint>
#include <vector>

#include "ef/scatter.hpp"
#include "ef/synth.hpp"

namespace ef::testing {

/// Five parties, one turnout component; used by slope and stuffing checks.
HonestModel geometry_model(std::size_t precincts = 3000);
FraudScenario stuffing_only();
FraudScenario stuffing_and_transfer();

/// Two-component turnout mixture with 10 000 precincts.
HonestModel calibration_model();

/// Small precincts (100..600 registered) and a leader near 50%.
HonestModel small_precinct_model();

/// Turnout near 75% with rounding toward 70/75/80/85 on 30% of precincts.
HonestModel rounding_model();
FraudScenario rounding_scenario();

/// Low honest turnout so the reference window is populated.
HonestModel stuffing_estimate_model();
FraudScenario stuffing_fraction(double fraction);

/// Final jump of 0.2 of registered on 20% of precincts.
FraudScenario jump_scenario();

/// Points drawn around the given centroids with isotropic sd.
std::vector<ScatterPoint> gaussian_cloud(const std::vector<std::array<double, 2>> &centroids,
                                         std::size_t per_component, double sd,
                                         std::uint64_t seed);

}  // namespace ef::testing

#endif  // EF_TESTS_SUPPORT_SCENARIOS_HPP_
