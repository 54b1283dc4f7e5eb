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

#ifndef EF_PEAKS_HPP_
#define EF_PEAKS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ef/dataset.hpp"
#include "ef/histogram.hpp"

namespace ef {

/// How each precinct's count is redrawn in a null replicate. All keep the
/// precinct's size n fixed and only resample counting noise.
///
/// kDeconvolved: the distribution of true fractions is fitted on a grid by
/// EM (nonparametric maximum likelihood under binomial noise); a precinct's
/// fraction is drawn from its grid posterior, then k* ~ Binomial(n, p*).
///
/// kPosteriorPredictive: k* ~ BetaBinomial(n, a + k, b + n - k), where
/// Beta(a, b) is fitted by moments to the spread of observed fractions after
/// removing binomial noise.
///
/// kPlugIn: k* ~ Binomial(n, k / n).
enum class NullModel { kDeconvolved, kPosteriorPredictive, kPlugIn };

std::string_view to_string(NullModel model);
NullModel parse_null_model(std::string_view text);

std::vector<int> default_peak_targets();  // 50, 55, ..., 100

struct PeakOptions {
  std::vector<int> targets = default_peak_targets();
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.01;
  WeightMode weight_mode = WeightMode::kPrecincts;
  Binning binning = Binning::kHalfUp;
  NullModel null_model = NullModel::kDeconvolved;
};

inline constexpr std::size_t kMinReplicates = 100;

/// Beta prior used by kPosteriorPredictive.
struct BetaPrior {
  double alpha = 1.0;
  double beta = 1.0;
  double mean = 0.5;
  double between_variance = 0.0;  // spread of true fractions
};

/// Moment fit over (k, n) pairs with n > 0.
BetaPrior fit_beta_prior(std::span<const std::pair<Count, Count>> fractions);

/// Mixing distribution used by kDeconvolved: weights on evenly spaced
/// fractions 0, 1/(m-1), ..., 1.
struct GridPrior {
  std::vector<double> support;
  std::vector<double> weights;
  std::size_t iterations = 0;
};

inline constexpr std::size_t kGridPoints = 401;

/// EM from a uniform start; stops after `max_iterations` or when the
/// log-likelihood gain per iteration drops below `tolerance`.
GridPrior fit_grid_prior(std::span<const std::pair<Count, Count>> fractions,
                         std::size_t grid_points = kGridPoints, std::size_t max_iterations = 2000,
                         double tolerance = 1e-6);

/// Probability of each integer-percent bin for one precinct under the null,
/// most probable bin first.
struct BinDistribution {
  std::vector<std::uint8_t> bins;
  std::vector<double> cumulative;  // ends at 1.0
};

BinDistribution null_bin_distribution(Count k, Count n, NullModel model, const BetaPrior &prior,
                                      Binning binning);
BinDistribution null_bin_distribution(Count k, Count n, const GridPrior &prior, Binning binning);

struct NullDistribution {
  std::vector<int> targets;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  BetaPrior prior;
  GridPrior grid;  // empty unless kDeconvolved
  /// Replicate histograms, [replicate][bin].
  std::vector<std::array<Count, kPercentBins>> histograms;

  std::vector<Count> target_weights(std::size_t target_index) const;
};

/// Replicate r draws from Rng(derive_seed(seed, kStreamNull, r)), so the
/// result depends only on (dataset, quantity, options), not on threading.
NullDistribution simulate_null(const ElectionDataset &dataset, const Quantity &quantity,
                               const PeakOptions &options);

/// One-sided Monte-Carlo p-value with add-one smoothing:
/// (1 + #{replicates >= observed}) / (replicates + 1).
double monte_carlo_p_value(std::span<const Count> null_weights, Count observed);

struct TargetResult {
  int target = 0;
  Count observed = 0;
  double null_mean = 0.0;
  double null_sd = 0.0;
  std::optional<double> z;  // unset when the null has zero spread
  double p_value = 1.0;
  bool flagged = false;
};

struct PeakReport {
  std::string quantity;
  PeakOptions options;
  BetaPrior prior;
  IntegerPercentHistogram observed;
  std::vector<TargetResult> targets;
  std::array<double, kPercentBins> null_mean{};
  std::array<double, kPercentBins> null_lo{};  // 0.5% replicate quantile
  std::array<double, kPercentBins> null_hi{};  // 99.5% replicate quantile

  std::vector<int> flagged_targets() const;
};

PeakReport detect_round_peaks(const ElectionDataset &dataset, const Quantity &quantity,
                              const PeakOptions &options);

}  // namespace ef

#endif  // EF_PEAKS_HPP_
