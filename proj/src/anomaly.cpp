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

#include "ef/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ef/error.hpp"
#include "ef/parallel.hpp"
#include "ef/rng.hpp"

namespace ef {

// ---------------------------------------------------------------------------
// Stuffing estimate

StuffingEstimate estimate_stuffing(const TurnoutBinTable &table, TurnoutWindow window) {
  if (!(window.lo < window.hi)) {
    fail(ErrorCode::kEmptyReferenceWindow, "reference window must have lo < hi");
  }
  const std::size_t leader = table.leader;
  std::vector<Count> leader_votes(table.bin_count), other_votes(table.bin_count);
  Count other_total = 0;
  for (std::size_t b = 0; b < table.bin_count; ++b) {
    for (std::size_t p = 0; p < table.votes[b].size(); ++p) {
      (p == leader ? leader_votes[b] : other_votes[b]) += table.votes[b][p];
    }
    other_total += other_votes[b];
  }

  constexpr double kEdge = 1e-9;
  Count leader_window = 0, other_window = 0;
  for (std::size_t b = 0; b < table.bin_count; ++b) {
    if (table.bin_lo(b) >= window.lo - kEdge && table.bin_hi(b) <= window.hi + kEdge) {
      leader_window += leader_votes[b];
      other_window += other_votes[b];
    }
  }
  if (other_window == 0 || 20 * other_window < other_total) {
    fail(ErrorCode::kEmptyReferenceWindow,
         "reference window holds less than 5% of non-leader votes");
  }

  StuffingEstimate est;
  est.window = window;
  est.reference_ratio = static_cast<double>(leader_window) / static_cast<double>(other_window);
  est.anomalous_by_bin.assign(table.bin_count, 0.0);
  // anomalous(b) = max(0, L(b) - k O(b)) with k = Lw / Ow, evaluated as
  // max(0, L(b) Ow - Lw O(b)) / Ow in exact integers.
  __int128 numerator_total = 0;
  for (std::size_t b = 0; b < table.bin_count; ++b) {
    const __int128 excess = static_cast<__int128>(leader_votes[b]) * other_window -
                            static_cast<__int128>(leader_window) * other_votes[b];
    if (excess > 0) {
      numerator_total += excess;
      est.anomalous_by_bin[b] = static_cast<double>(excess) / static_cast<double>(other_window);
    }
  }
  est.total_anomalous =
      static_cast<double>(numerator_total) / static_cast<double>(other_window);
  est.leader_total = std::accumulate(leader_votes.begin(), leader_votes.end(), Count{0});
  est.ballots_total = table.total_ballots();
  if (est.ballots_total > 0) {
    est.observed_share =
        static_cast<double>(est.leader_total) / static_cast<double>(est.ballots_total);
    const double remaining = static_cast<double>(est.ballots_total) - est.total_anomalous;
    est.adjusted_share =
        remaining > 0
            ? std::clamp((static_cast<double>(est.leader_total) - est.total_anomalous) / remaining,
                         0.0, 1.0)
            : 0.0;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Superlinearity

std::string_view to_string(Linearity linearity) {
  return linearity == Linearity::kLinear ? "linear" : "superlinear";
}

LinearityCheck superlinearity_check(std::span<const ScatterPoint> points) {
  if (points.size() < kMinLinearityPoints) {
    fail(ErrorCode::kBadArgument, "superlinearity check needs at least " +
                                      std::to_string(kMinLinearityPoints) + " points");
  }
  std::vector<ScatterPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const ScatterPoint &a, const ScatterPoint &b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  const std::size_t half = sorted.size() / 2;
  const std::span<const ScatterPoint> all(sorted);

  LinearityCheck check;
  check.split_x = sorted[half - 1].x;
  check.lower = fit_trend(all.subspan(0, half));
  check.upper = fit_trend(all.subspan(half));
  check.slope_gap = check.upper.slope - check.lower.slope;
  check.combined_stderr = std::hypot(check.lower.slope_stderr, check.upper.slope_stderr);
  // relative floor for exact lines
  const double floor =
      1e-9 * (1.0 + std::abs(check.lower.slope) + std::abs(check.upper.slope));
  check.verdict = check.slope_gap > std::max(2.0 * check.combined_stderr, floor)
                      ? Linearity::kSuperlinear
                      : Linearity::kLinear;
  return check;
}

// ---------------------------------------------------------------------------
// Two-cluster split

namespace {

struct Point2 {
  double x, y;
};

struct Mixture {
  std::array<Point2, 2> mean{};
  std::array<double, 2> variance{};
  std::array<double, 2> weight{};
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool valid = false;
};

constexpr double kVarianceFloor = 1e-12;
constexpr double kLog2Pi = 1.8378770664093454836;

double squared_distance(const Point2 &a, const Point2 &b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Log density of an isotropic 2-D Gaussian.
double log_density(const Point2 &p, const Point2 &mean, double variance) {
  return -kLog2Pi - std::log(variance) - 0.5 * squared_distance(p, mean) / variance;
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

Mixture run_em(const std::vector<Point2> &pts, std::uint64_t seed, const ClusterOptions &options,
               double total_variance) {
  Rng rng(seed);
  const std::size_t n = pts.size();
  Mixture m;

  // k-means++: first centre uniform, second with probability proportional to
  // squared distance from the first.
  const Point2 first = pts[rng.below(n)];
  std::vector<double> d2(n);
  double d2_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(pts[i], first);
    d2_total += d2[i];
  }
  if (!(d2_total > 0)) return m;
  double target = rng.uniform() * d2_total;
  std::size_t pick = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    target -= d2[i];
    if (target < 0) {
      pick = i;
      break;
    }
  }
  m.mean = {first, pts[pick]};
  m.variance = {std::max(total_variance, kVarianceFloor),
                std::max(total_variance, kVarianceFloor)};
  m.weight = {0.5, 0.5};

  std::vector<double> resp(n);  // responsibility of component 1
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double ll = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double l0 = std::log(m.weight[0]) + log_density(pts[i], m.mean[0], m.variance[0]);
      const double l1 = std::log(m.weight[1]) + log_density(pts[i], m.mean[1], m.variance[1]);
      const double total = log_sum_exp(l0, l1);
      resp[i] = std::exp(l1 - total);
      ll += total;
    }
    m.log_likelihood = ll;
    if (std::abs(ll - previous) <= options.tolerance * std::max(1.0, std::abs(ll))) break;
    previous = ll;

    std::array<double, 2> mass{}, sx{}, sy{};
    for (std::size_t i = 0; i < n; ++i) {
      const double r[2] = {1.0 - resp[i], resp[i]};
      for (int k = 0; k < 2; ++k) {
        mass[k] += r[k];
        sx[k] += r[k] * pts[i].x;
        sy[k] += r[k] * pts[i].y;
      }
    }
    if (mass[0] < 1e-9 || mass[1] < 1e-9) return m;  // collapsed
    for (int k = 0; k < 2; ++k) m.mean[k] = {sx[k] / mass[k], sy[k] / mass[k]};
    std::array<double, 2> ss{};
    for (std::size_t i = 0; i < n; ++i) {
      ss[0] += (1.0 - resp[i]) * squared_distance(pts[i], m.mean[0]);
      ss[1] += resp[i] * squared_distance(pts[i], m.mean[1]);
    }
    for (int k = 0; k < 2; ++k) {
      m.variance[k] = std::max(ss[k] / (2.0 * mass[k]), kVarianceFloor);
      m.weight[k] = mass[k] / static_cast<double>(n);
    }
  }
  m.valid = std::isfinite(m.log_likelihood);
  return m;
}

}  // namespace

ClusterSplit split_two_clusters(std::span<const ScatterPoint> points,
                                const ClusterOptions &options) {
  if (points.size() < kMinClusterPoints) {
    fail(ErrorCode::kBadArgument, "cluster split needs at least " +
                                      std::to_string(kMinClusterPoints) + " points");
  }
  const std::size_t n = points.size();
  // Canonical order makes the seeded starts independent of input order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].x != points[b].x) return points[a].x < points[b].x;
    return points[a].y < points[b].y;
  });
  std::vector<Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {points[order[i]].x, points[order[i]].y};

  Point2 centre{0, 0};
  for (const auto &p : pts) {
    centre.x += p.x;
    centre.y += p.y;
  }
  centre.x /= static_cast<double>(n);
  centre.y /= static_cast<double>(n);
  double ss = 0;
  for (const auto &p : pts) ss += squared_distance(p, centre);
  const double variance_one = std::max(ss / (2.0 * static_cast<double>(n)), kVarianceFloor);
  double ll_one = 0;
  for (const auto &p : pts) ll_one += log_density(p, centre, variance_one);

  const double log_n = std::log(static_cast<double>(n));
  ClusterSplit split;
  split.bic_one = -2.0 * ll_one + 3.0 * log_n;

  std::vector<Mixture> fits(options.restarts);
  parallel_for(options.restarts, [&](std::size_t r) {
    fits[r] = run_em(pts, derive_seed(options.seed, kStreamCluster, r), options, variance_one);
  });
  std::size_t best = options.restarts;
  double best_bic = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < fits.size(); ++r) {
    if (!fits[r].valid) continue;
    const double bic = -2.0 * fits[r].log_likelihood + 7.0 * log_n;
    if (bic < best_bic) {
      best_bic = bic;
      best = r;
    }
  }

  split.assignment.assign(n, 0);
  if (best == options.restarts) {
    // Every start collapsed: the data support a single component only.
    split.bic_two = std::numeric_limits<double>::infinity();
    split.separation = std::numeric_limits<double>::infinity();
    split.centroids = {{{centre.x, centre.y}, {centre.x, centre.y}}};
    split.sd = {std::sqrt(variance_one), std::sqrt(variance_one)};
    split.weights = {1.0, 0.0};
    return split;
  }

  Mixture m = fits[best];
  // Component 0 is the one with the lower centroid x.
  if (m.mean[1].x < m.mean[0].x || (m.mean[1].x == m.mean[0].x && m.mean[1].y < m.mean[0].y)) {
    std::swap(m.mean[0], m.mean[1]);
    std::swap(m.variance[0], m.variance[1]);
    std::swap(m.weight[0], m.weight[1]);
  }
  split.winning_restart = best;
  split.bic_two = best_bic;
  split.separation = split.bic_two - split.bic_one;
  split.two_clusters = split.separation <= -kBicThreshold;
  for (int k = 0; k < 2; ++k) {
    split.centroids[k] = {m.mean[k].x, m.mean[k].y};
    split.sd[k] = std::sqrt(m.variance[k]);
    split.weights[k] = m.weight[k];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double l0 = std::log(m.weight[0]) + log_density(pts[i], m.mean[0], m.variance[0]);
    const double l1 = std::log(m.weight[1]) + log_density(pts[i], m.mean[1], m.variance[1]);
    split.assignment[order[i]] = l1 > l0 ? 1 : 0;
  }
  return split;
}

}  // namespace ef
