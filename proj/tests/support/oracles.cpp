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

#include "support/oracles.hpp"

#include <cmath>
#include <random>

namespace ef::testing {

std::string source_path(const std::string &relative) {
  return std::string(EF_SOURCE_DIR) + "/" + relative;
}

double ks_brute_force(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return 0.0;
  const auto cdf = [](std::span<const double> s, double t) {
    std::size_t c = 0;
    for (double v : s) {
      if (v <= t) ++c;
    }
    return static_cast<double>(c) / static_cast<double>(s.size());
  };
  double best = 0.0;
  for (auto sample : {a, b}) {
    for (double t : sample) best = std::max(best, std::abs(cdf(a, t) - cdf(b, t)));
  }
  return best;
}

double neighbour_z(const IntegerPercentHistogram &h, int t) {
  const auto at = [&](int b) { return static_cast<double>(h.bins[static_cast<std::size_t>(b)]); };
  const double left = t > 0 ? at(t - 1) : at(t + 1);
  const double right = t < 100 ? at(t + 1) : at(t - 1);
  const double m = (left + right) / 2.0;
  const double var = at(t) + (left + right) / 4.0;
  return var > 0 ? (at(t) - m) / std::sqrt(var) : 0.0;
}

bool neighbour_flags(const IntegerPercentHistogram &h, int target) {
  return neighbour_z(h, target) > 2.326;
}

Rational odds_by_enumeration(double likelihood_a, double prior_a, double likelihood_b,
                             double prior_b, std::int64_t outcomes) {
  const auto block_a = static_cast<std::int64_t>(std::llround(prior_a * static_cast<double>(outcomes)));
  const auto block_b = static_cast<std::int64_t>(std::llround(prior_b * static_cast<double>(outcomes)));
  const auto hit_a = static_cast<std::int64_t>(std::llround(likelihood_a * static_cast<double>(block_a)));
  const auto hit_b = static_cast<std::int64_t>(std::llround(likelihood_b * static_cast<double>(block_b)));
  std::int64_t count_a = 0, count_b = 0;
  for (std::int64_t i = 0; i < outcomes; ++i) {
    if (i < block_a) {
      if (i < hit_a) ++count_a;
    } else if (i < block_a + block_b) {
      if (i - block_a < hit_b) ++count_b;
    }
  }
  return Rational(count_b, count_a);
}

std::int64_t simulate_losing_runs(std::int64_t bettors, int n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  const int per_word = 64 / n;
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  std::int64_t hits = 0;
  for (std::int64_t done = 0; done < bettors;) {
    std::uint64_t word = engine();
    for (int k = 0; k < per_word && done < bettors; ++k, ++done) {
      if ((word & mask) == 0) ++hits;  // every bit 0 = every bet lost
      word >>= n;
    }
  }
  return hits;
}

std::int64_t simulate_subset_hits(std::int64_t trials, int total, int marked, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    // Draw without replacement one item at a time; the i-th draw must be one
    // of the marked - i fixed items still left among total - i.
    bool match = true;
    for (int i = 0; i < marked && match; ++i) {
      std::uniform_int_distribution<int> pick(0, total - i - 1);
      match = pick(engine) < marked - i;
    }
    if (match) ++hits;
  }
  return hits;
}

double simulate_proportion_sd(double p, std::int64_t n, std::int64_t draws, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::binomial_distribution<std::int64_t> dist(n, p);
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const double x = static_cast<double>(dist(engine)) / static_cast<double>(n);
    const double d = x - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (x - mean);
  }
  return std::sqrt(m2 / static_cast<double>(draws - 1));
}

PrecinctRecord record(std::string id, Count registered, Count cast, std::vector<Count> votes,
                      Count invalid, bool machine, std::string territory) {
  PrecinctRecord r;
  r.precinct_id = std::move(id);
  r.region = "R";
  r.territory = std::move(territory);
  r.registered = registered;
  r.ballots_cast = cast;
  r.invalid_ballots = invalid;
  r.votes = std::move(votes);
  r.machine_counted = machine;
  return r;
}

}  // namespace ef::testing
