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

#include "ef/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ef {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection on the top multiple of n.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

namespace {

double log_binomial_pmf(std::int64_t n, std::int64_t k, double log_p,
                        double log_q) {
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) -
         std::lgamma(dn - dk + 1.0) + dk * log_p + (dn - dk) * log_q;
}

}  // namespace

std::int64_t Rng::binomial(std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;

  const double q = 1.0 - p;
  const double ratio = p / q;
  auto mode = static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1.0) * p));
  mode = std::clamp<std::int64_t>(mode, 0, n);

  const double f_mode = std::exp(log_binomial_pmf(n, mode, std::log(p), std::log(q)));
  const double u = uniform();
  double cumulative = f_mode;
  if (u < cumulative) return mode;

  // Walk outward from the mode, alternating sides; pmf recurrences keep each
  // step O(1).
  std::int64_t lo = mode, hi = mode;
  double f_lo = f_mode, f_hi = f_mode;
  while (lo > 0 || hi < n) {
    if (hi < n) {
      f_hi *= ratio * static_cast<double>(n - hi) / static_cast<double>(hi + 1);
      ++hi;
      cumulative += f_hi;
      if (u < cumulative) return hi;
    }
    if (lo > 0) {
      f_lo *= static_cast<double>(lo) / (ratio * static_cast<double>(n - lo + 1));
      --lo;
      cumulative += f_lo;
      if (u < cumulative) return lo;
    }
    if (f_hi < 1e-300 && f_lo < 1e-300) break;
  }
  // Rounding left u above the accumulated mass.
  return mode;
}

std::vector<std::int64_t> Rng::multinomial(std::int64_t n,
                                           std::span<const double> probs) {
  std::vector<std::int64_t> out(probs.size(), 0);
  double remaining_mass = 1.0;
  std::int64_t remaining = n;
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    const double p = std::max(0.0, probs[i]);
    if (remaining_mass <= 0.0) break;
    const double conditional = std::min(1.0, p / remaining_mass);
    out[i] = binomial(remaining, conditional);
    remaining -= out[i];
    remaining_mass -= p;
  }
  return out;
}

}  // namespace ef
