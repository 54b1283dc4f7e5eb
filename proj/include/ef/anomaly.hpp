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

#ifndef EF_ANOMALY_HPP_
#define EF_ANOMALY_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ef/histogram.hpp"
#include "ef/scatter.hpp"

namespace ef {

struct TurnoutWindow {
  double lo = 0.15;
  double hi = 0.35;
};

/// Comet-tail decomposition of a TurnoutBinTable. Non-leader votes stand in
/// for the honest electorate: inside the reference window the leader gets
/// `reference_ratio` votes per non-leader vote, and leader votes above that
/// ratio in any bin are counted as anomalous.
struct StuffingEstimate {
  TurnoutWindow window;
  double reference_ratio = 0.0;
  std::vector<double> anomalous_by_bin;  // aligned to the table's bins
  double total_anomalous = 0.0;
  Count leader_total = 0;
  Count ballots_total = 0;
  double observed_share = 0.0;  // leader share of cast before removal
  double adjusted_share = 0.0;  // after removal
};

/// Throws EmptyReferenceWindow when the window holds less than 5% of all
/// non-leader votes. A table in which every bin has the window's
/// leader/non-leader ratio yields exactly zero.
StuffingEstimate estimate_stuffing(const TurnoutBinTable &table,
                                   TurnoutWindow window = {});

enum class Linearity { kLinear, kSuperlinear };

std::string_view to_string(Linearity linearity);

struct LinearityCheck {
  Linearity verdict = Linearity::kLinear;
  double split_x = 0.0;  // largest x in the lower half
  TrendFit lower;
  TrendFit upper;
  double slope_gap = 0.0;        // upper.slope - lower.slope
  double combined_stderr = 0.0;  // sqrt(se_lower^2 + se_upper^2)
};

inline constexpr std::size_t kMinLinearityPoints = 50;

/// Fits the lower and upper turnout halves separately and declares
/// superlinear when the upper slope exceeds the lower by more than two
/// combined standard errors.
LinearityCheck superlinearity_check(std::span<const ScatterPoint> points);

struct ClusterSplit {
  std::vector<int> assignment;  // per input point, 0 or 1
  std::array<std::array<double, 2>, 2> centroids{};  // component 0 has the lower x
  std::array<double, 2> sd{};                        // per-axis sd of each component
  std::array<double, 2> weights{};
  double bic_one = 0.0;
  double bic_two = 0.0;
  double separation = 0.0;  // bic_two - bic_one; <= -kBicThreshold means two
  bool two_clusters = false;
  std::size_t winning_restart = 0;
};

struct ClusterOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 20;
  double tolerance = 1e-8;
  std::size_t max_iterations = 1000;
};

inline constexpr double kBicThreshold = 10.0;
inline constexpr std::size_t kMinClusterPoints = 20;

/// Two-component spherical Gaussian mixture on (x, y) by EM with k-means++
/// starts, compared with a single Gaussian by BIC.
ClusterSplit split_two_clusters(std::span<const ScatterPoint> points,
                                const ClusterOptions &options = {});

}  // namespace ef

#endif  // EF_ANOMALY_HPP_
