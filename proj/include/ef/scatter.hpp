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

#ifndef EF_SCATTER_HPP_
#define EF_SCATTER_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ef/dataset.hpp"

namespace ef {

/// Pseudo-party: votes of every party except the leader (invalid ballots are
/// not included).
inline constexpr std::string_view kOthersParty = "others";

enum class YMode { kShareOfRegistered, kShareOfCast };
enum class Weighting { kUniform, kByRegistered };

struct ScatterPoint {
  std::string precinct_id;
  double x = 0.0;  // turnout
  double y = 0.0;  // share, per YMode
  double weight = 0.0;  // registered voters
};

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double slope_stderr = 0.0;
  std::size_t point_count = 0;
};

/// One point per precinct for `party` (a roster id or kOthersParty).
std::vector<ScatterPoint> build_points(const ElectionDataset &dataset,
                                       std::string_view party, YMode mode);

/// Weighted least squares y = slope * x + intercept. Points are summed in a
/// canonical (x, y) order so the fit does not depend on input order. Throws
/// DegenerateX when fewer than two distinct x values are present.
TrendFit fit_trend(std::span<const ScatterPoint> points,
                   Weighting weighting = Weighting::kUniform);

std::string_view to_string(YMode mode);
std::string_view to_string(Weighting weighting);

}  // namespace ef

#endif  // EF_SCATTER_HPP_
