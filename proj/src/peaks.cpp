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

#include "ef/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ef/error.hpp"
#include "ef/parallel.hpp"
#include "ef/rng.hpp"

namespace ef {

namespace {

// Bounds on the fitted prior strength a + b. The upper bound stands in for
// "no between-precinct spread" (the predictive becomes binomial).
constexpr double kMinConcentration = 1e-3;
constexpr double kMaxConcentration = 1e8;
constexpr double kTailCutoff = 1e-17;
constexpr double kBinomialCutoff = 1e-13;
constexpr double kWindowLogDrop = 30.0;
constexpr double kPosteriorCutoff = 1e-9;

BinDistribution to_distribution(const std::array<double, kPercentBins> &mass) {
  std::vector<std::uint8_t> order;
  for (int bin = 0; bin < kPercentBins; ++bin) {
    if (mass[bin] > 0) order.push_back(static_cast<std::uint8_t>(bin));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint8_t x, std::uint8_t y) { return mass[x] > mass[y]; });
  BinDistribution dist;
  dist.bins = order;
  double total = 0;
  for (auto bin : order) total += mass[bin];
  double running = 0;
  for (auto bin : order) {
    running += mass[bin] / total;
    dist.cumulative.push_back(std::min(running, 1.0));
  }
  dist.cumulative.back() = 1.0;
  return dist;
}

// Adds weight * Binomial(n, p) to the bins.
void add_binomial(Count n, double p, double weight, Binning binning,
                  std::array<double, kPercentBins> &mass) {
  if (p <= 0.0 || n == 0) {
    mass[percent_bin(0, n, binning)] += weight;
    return;
  }
  if (p >= 1.0) {
    mass[percent_bin(n, n, binning)] += weight;
    return;
  }
  const double odds = p / (1.0 - p);
  const Count mode =
      std::clamp<Count>(static_cast<Count>(std::floor(static_cast<double>(n + 1) * p)), 0, n);
  std::array<double, kPercentBins> local{};
  local[percent_bin(mode, n, binning)] = 1.0;
  double total = 1.0, f = 1.0;
  for (Count j = mode; j < n; ++j) {
    f *= odds * static_cast<double>(n - j) / static_cast<double>(j + 1);
    if (f < kBinomialCutoff) break;
    local[percent_bin(j + 1, n, binning)] += f;
    total += f;
  }
  f = 1.0;
  for (Count j = mode; j > 0; --j) {
    f /= odds * static_cast<double>(n - j + 1) / static_cast<double>(j);
    if (f < kBinomialCutoff) break;
    local[percent_bin(j - 1, n, binning)] += f;
    total += f;
  }
  const double scale = weight / total;
  for (int bin = 0; bin < kPercentBins; ++bin) {
    if (local[bin] > 0) mass[bin] += scale * local[bin];
  }
}

// exp(log-likelihood - max) over the grid points near the maximum.
struct LikelihoodWindow {
  std::size_t first = 0;
  std::vector<double> values;
};

LikelihoodWindow likelihood_window(Count k, Count n, const std::vector<double> &support) {
  const auto kd = static_cast<double>(k), rest = static_cast<double>(n - k);
  const auto log_lik = [&](double g) {
    if ((g <= 0.0 && k > 0) || (g >= 1.0 && k < n)) return -std::numeric_limits<double>::infinity();
    return (k > 0 ? kd * std::log(g) : 0.0) + (k < n ? rest * std::log1p(-g) : 0.0);
  };
  const double top = static_cast<double>(support.size() - 1);
  const auto centre = static_cast<std::size_t>(std::llround(kd / static_cast<double>(n) * top));
  // Concave in g, so the window is contiguous around the maximum.
  std::size_t best = centre;
  double best_ll = log_lik(support[centre]);
  for (std::size_t j : {centre > 0 ? centre - 1 : centre, std::min(centre + 1, support.size() - 1)}) {
    if (const double ll = log_lik(support[j]); ll > best_ll) {
      best = j;
      best_ll = ll;
    }
  }
  std::size_t lo = best, hi = best;
  while (lo > 0 && log_lik(support[lo - 1]) >= best_ll - kWindowLogDrop) --lo;
  while (hi + 1 < support.size() && log_lik(support[hi + 1]) >= best_ll - kWindowLogDrop) ++hi;
  LikelihoodWindow w;
  w.first = lo;
  for (std::size_t j = lo; j <= hi; ++j) w.values.push_back(std::exp(log_lik(support[j]) - best_ll));
  return w;
}

}  // namespace

std::string_view to_string(NullModel model) {
  switch (model) {
    case NullModel::kDeconvolved: return "deconvolved";
    case NullModel::kPosteriorPredictive: return "posterior_predictive";
    case NullModel::kPlugIn: return "plug_in";
  }
  return "?";
}

NullModel parse_null_model(std::string_view text) {
  if (text == "deconvolved") return NullModel::kDeconvolved;
  if (text == "posterior_predictive") return NullModel::kPosteriorPredictive;
  if (text == "plug_in") return NullModel::kPlugIn;
  fail(ErrorCode::kBadArgument, "unknown null model '" + std::string(text) + "'");
}

std::vector<int> default_peak_targets() {
  std::vector<int> targets;
  for (int t = 50; t <= 100; t += 5) targets.push_back(t);
  return targets;
}

BetaPrior fit_beta_prior(std::span<const std::pair<Count, Count>> fractions) {
  BetaPrior prior;
  if (fractions.empty()) return prior;
  const auto count = static_cast<double>(fractions.size());
  double sum = 0, inverse_n = 0;
  for (const auto &[k, n] : fractions) {
    sum += static_cast<double>(k) / static_cast<double>(n);
    inverse_n += 1.0 / static_cast<double>(n);
  }
  const double mean = sum / count;
  const double h = inverse_n / count;
  double variance = 0;
  for (const auto &[k, n] : fractions) {
    const double d = static_cast<double>(k) / static_cast<double>(n) - mean;
    variance += d * d;
  }
  variance /= count;

  // Var(k/n) = tau^2 + (m(1-m) - tau^2) / n, averaged over precincts.
  const double bernoulli = mean * (1.0 - mean);
  double between = variance;
  if (h < 1.0 - 1e-12) between = (variance - bernoulli * h) / (1.0 - h);

  double concentration = kMaxConcentration;
  if (between > 0 && bernoulli > 0) {
    concentration = std::clamp(bernoulli / between - 1.0, kMinConcentration, kMaxConcentration);
  }
  prior.mean = mean;
  prior.between_variance = std::max(0.0, between);
  prior.alpha = std::max(mean * concentration, 1e-9);
  prior.beta = std::max((1.0 - mean) * concentration, 1e-9);
  return prior;
}

BinDistribution null_bin_distribution(Count k, Count n, NullModel model, const BetaPrior &prior,
                                      Binning binning) {
  std::array<double, kPercentBins> mass{};
  if (model == NullModel::kPlugIn && (k == 0 || k == n)) {
    mass[percent_bin(k, n, binning)] = 1.0;
  } else {
    // Unnormalized pmf ratio f(j+1)/f(j).
    double a = 0, b = 0, ratio_p = 0;
    if (model == NullModel::kPosteriorPredictive) {
      a = prior.alpha + static_cast<double>(k);
      b = prior.beta + static_cast<double>(n - k);
    } else {
      const double p = static_cast<double>(k) / static_cast<double>(n);
      ratio_p = p / (1.0 - p);
    }
    auto up = [&](Count j) {  // f(j+1)/f(j)
      const double comb = static_cast<double>(n - j) / static_cast<double>(j + 1);
      if (model == NullModel::kPlugIn) return comb * ratio_p;
      return comb * (static_cast<double>(j) + a) / (static_cast<double>(n - j - 1) + b);
    };
    const double center = model == NullModel::kPlugIn
                              ? static_cast<double>(k)
                              : static_cast<double>(n) * a / (a + b);
    const Count start = std::clamp<Count>(static_cast<Count>(std::llround(center)), 0, n);

    std::vector<double> upper{1.0};  // f(start), f(start+1), ...
    double peak = 1.0;
    for (Count j = start; j < n; ++j) {
      const double next = upper.back() * up(j);
      upper.push_back(next);
      peak = std::max(peak, next);
      if (next < kTailCutoff * peak && next <= upper[upper.size() - 2]) break;
    }
    std::vector<double> lower;  // f(start-1), f(start-2), ...
    double current = 1.0;
    for (Count j = start; j > 0; --j) {
      const double next = current / up(j - 1);
      lower.push_back(next);
      peak = std::max(peak, next);
      if (next < kTailCutoff * peak && next <= current) break;
      current = next;
    }
    double total = 0;
    for (double f : upper) total += f;
    for (double f : lower) total += f;
    for (std::size_t i = 0; i < upper.size(); ++i) {
      mass[percent_bin(start + static_cast<Count>(i), n, binning)] += upper[i] / total;
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
      mass[percent_bin(start - 1 - static_cast<Count>(i), n, binning)] += lower[i] / total;
    }
  }

  return to_distribution(mass);
}

BinDistribution null_bin_distribution(Count k, Count n, const GridPrior &prior, Binning binning) {
  if (prior.support.empty() || prior.support.size() != prior.weights.size()) {
    fail(ErrorCode::kBadArgument, "grid prior is empty");
  }
  const auto window = likelihood_window(k, n, prior.support);
  std::vector<double> posterior(window.values.size());
  double total = 0, peak = 0;
  for (std::size_t j = 0; j < posterior.size(); ++j) {
    posterior[j] = prior.weights[window.first + j] * window.values[j];
    total += posterior[j];
    peak = std::max(peak, posterior[j]);
  }
  std::array<double, kPercentBins> mass{};
  if (total <= 0) {
    // Prior has no mass near k / n.
    add_binomial(n, static_cast<double>(k) / static_cast<double>(n), 1.0, binning, mass);
    return to_distribution(mass);
  }
  for (std::size_t j = 0; j < posterior.size(); ++j) {
    if (posterior[j] < kPosteriorCutoff * peak) continue;
    add_binomial(n, prior.support[window.first + j], posterior[j] / total, binning, mass);
  }
  return to_distribution(mass);
}

GridPrior fit_grid_prior(std::span<const std::pair<Count, Count>> fractions,
                         std::size_t grid_points, std::size_t max_iterations, double tolerance) {
  if (grid_points < 2) fail(ErrorCode::kBadArgument, "grid needs at least 2 points");
  GridPrior prior;
  prior.support.resize(grid_points);
  for (std::size_t j = 0; j < grid_points; ++j) {
    prior.support[j] = static_cast<double>(j) / static_cast<double>(grid_points - 1);
  }
  prior.weights.assign(grid_points, 1.0 / static_cast<double>(grid_points));
  if (fractions.empty()) return prior;

  std::vector<LikelihoodWindow> windows;
  windows.reserve(fractions.size());
  for (const auto &[k, n] : fractions) windows.push_back(likelihood_window(k, n, prior.support));

  const auto count = static_cast<double>(fractions.size());
  std::vector<double> next(grid_points);
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    double log_lik = 0;
    for (const auto &w : windows) {
      double denom = 0;
      for (std::size_t j = 0; j < w.values.size(); ++j) denom += prior.weights[w.first + j] * w.values[j];
      if (denom <= 0) continue;
      log_lik += std::log(denom);
      for (std::size_t j = 0; j < w.values.size(); ++j) {
        next[w.first + j] += prior.weights[w.first + j] * w.values[j] / denom;
      }
    }
    for (std::size_t j = 0; j < grid_points; ++j) prior.weights[j] = next[j] / count;
    prior.iterations = it + 1;
    if (log_lik - previous < tolerance * count) break;
    previous = log_lik;
  }
  return prior;
}

std::vector<Count> NullDistribution::target_weights(std::size_t target_index) const {
  std::vector<Count> out;
  out.reserve(histograms.size());
  const int bin = targets.at(target_index);
  for (const auto &h : histograms) out.push_back(h[bin]);
  return out;
}

NullDistribution simulate_null(const ElectionDataset &dataset, const Quantity &quantity,
                               const PeakOptions &options) {
  if (options.replicates < kMinReplicates) {
    fail(ErrorCode::kBadArgument, "replicates must be at least " + std::to_string(kMinReplicates));
  }
  for (int t : options.targets) {
    if (t < 0 || t >= kPercentBins) {
      fail(ErrorCode::kBadArgument, "target " + std::to_string(t) + " outside 0..100");
    }
  }

  std::vector<std::pair<Count, Count>> fractions;
  std::vector<Count> weights;
  for (const auto &r : dataset.records()) {
    if (const auto f = quantity_fraction(r, quantity, dataset.leader())) {
      fractions.push_back(*f);
      weights.push_back(unit_weight(r, options.weight_mode));
    }
  }

  NullDistribution null;
  null.targets = options.targets;
  null.replicates = options.replicates;
  null.seed = options.seed;
  null.prior = fit_beta_prior(fractions);
  if (options.null_model == NullModel::kDeconvolved) null.grid = fit_grid_prior(fractions);

  // Flattened per-precinct tables: entries [offsets[i], offsets[i+1]).
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint8_t> bins;
  std::vector<double> cumulative;
  offsets.reserve(fractions.size() + 1);
  for (const auto &[k, n] : fractions) {
    const auto dist =
        options.null_model == NullModel::kDeconvolved
            ? null_bin_distribution(k, n, null.grid, options.binning)
            : null_bin_distribution(k, n, options.null_model, null.prior, options.binning);
    bins.insert(bins.end(), dist.bins.begin(), dist.bins.end());
    cumulative.insert(cumulative.end(), dist.cumulative.begin(), dist.cumulative.end());
    offsets.push_back(bins.size());
  }

  null.histograms.assign(options.replicates, {});
  parallel_for(options.replicates, [&](std::size_t rep) {
    Rng rng(derive_seed(options.seed, kStreamNull, rep));
    auto &hist = null.histograms[rep];
    for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
      const double u = rng.uniform();
      std::size_t j = offsets[i];
      const std::size_t last = offsets[i + 1] - 1;
      while (j < last && u >= cumulative[j]) ++j;
      hist[bins[j]] += weights[i];
    }
  });
  return null;
}

double monte_carlo_p_value(std::span<const Count> null_weights, Count observed) {
  const auto exceed = std::count_if(null_weights.begin(), null_weights.end(),
                                    [observed](Count w) { return w >= observed; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(null_weights.size()) + 1.0);
}

std::vector<int> PeakReport::flagged_targets() const {
  std::vector<int> out;
  for (const auto &t : targets) {
    if (t.flagged) out.push_back(t.target);
  }
  return out;
}

PeakReport detect_round_peaks(const ElectionDataset &dataset, const Quantity &quantity,
                              const PeakOptions &options) {
  const auto null = simulate_null(dataset, quantity, options);
  PeakReport report;
  report.quantity = quantity.label(dataset);
  report.options = options;
  report.prior = null.prior;
  report.observed =
      integer_percent_histogram(dataset, quantity, options.weight_mode, options.binning);

  const auto reps = static_cast<double>(null.replicates);
  for (std::size_t ti = 0; ti < options.targets.size(); ++ti) {
    const auto samples = null.target_weights(ti);
    TargetResult r;
    r.target = options.targets[ti];
    r.observed = report.observed.bins[r.target];
    double sum = 0;
    for (Count w : samples) sum += static_cast<double>(w);
    r.null_mean = sum / reps;
    double ss = 0;
    for (Count w : samples) {
      const double d = static_cast<double>(w) - r.null_mean;
      ss += d * d;
    }
    r.null_sd = std::sqrt(ss / (reps - 1.0));
    const double diff = static_cast<double>(r.observed) - r.null_mean;
    if (r.null_sd > 0) {
      r.z = diff / r.null_sd;
    } else if (diff == 0) {
      r.z = 0.0;
    }
    r.p_value = monte_carlo_p_value(samples, r.observed);
    r.flagged = r.p_value < options.alpha;
    report.targets.push_back(r);
  }

  // Envelope for plotting: per-bin mean and central 99% of replicates.
  std::vector<Count> column(null.replicates);
  const auto lo_index = static_cast<std::size_t>(std::floor(0.005 * (reps - 1.0)));
  const auto hi_index = static_cast<std::size_t>(std::ceil(0.995 * (reps - 1.0)));
  for (int bin = 0; bin < kPercentBins; ++bin) {
    double sum = 0;
    for (std::size_t rep = 0; rep < null.replicates; ++rep) {
      column[rep] = null.histograms[rep][bin];
      sum += static_cast<double>(column[rep]);
    }
    std::sort(column.begin(), column.end());
    report.null_mean[bin] = sum / reps;
    report.null_lo[bin] = static_cast<double>(column[lo_index]);
    report.null_hi[bin] = static_cast<double>(column[hi_index]);
  }
  return report;
}

}  // namespace ef
