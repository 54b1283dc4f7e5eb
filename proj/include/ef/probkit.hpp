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

#ifndef EF_PROBKIT_HPP_
#define EF_PROBKIT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ef {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a decimal literal such as "0.9", "1e-6", "-2.5E3" or "7".
/// Throws BadArgument on anything else.
Rational parse_decimal(std::string_view text);

/// Exact value of a finite double (its binary expansion).
Rational exact(double value);

/// "1000/9", or "3" for integers.
std::string format_fraction(const Rational &value);
/// "111 1/9"; proper fractions and integers as in format_fraction.
std::string format_mixed(const Rational &value);
/// Correctly rounded nearest double.
double to_double(const Rational &value);
/// Decimal expansion with `digits` significant digits (round half to even on
/// the exact value).
std::string format_significant(const Rational &value, int digits);

struct OddsResult {
  Rational ratio;  // (likelihood_b * prior_b) / (likelihood_a * prior_a)
  std::string favored;  // label_a, label_b, or "neither" at exactly 1

  double value() const { return to_double(ratio); }
};

/// Posterior odds of B against A. Inputs must lie in (0, 1]; throws
/// NonPositiveInput otherwise.
OddsResult posterior_odds(const Rational &likelihood_a, const Rational &prior_a,
                          const Rational &likelihood_b, const Rational &prior_b,
                          std::string label_a = "A", std::string label_b = "B");

/// p^n. Throws BadArgument unless p lies in [0, 1].
double run_probability(double p, std::uint64_t n);
Rational run_probability_exact(const Rational &p, std::uint64_t n);

inline constexpr std::int64_t kExactBinomialLimit = 10000;

struct Coincidence {
  std::int64_t total = 0;
  std::int64_t marked = 0;
  std::optional<BigInt> subsets;  // C(total, marked), when total <= kExactBinomialLimit
  double probability = 0.0;       // 1 / C(total, marked); may underflow to 0
  double log10_probability = 0.0;
  bool exact = false;

  /// 1/C(total, marked) when exact.
  std::optional<Rational> fraction() const;
};

/// Chance that a uniformly random `marked`-subset of `total` items equals one
/// fixed subset of size `observed_set_size`. Exact up to
/// kExactBinomialLimit items, log-gamma beyond. Throws BadCounts unless
/// 0 <= marked == observed_set_size <= total.
Coincidence subset_coincidence(std::int64_t total, std::int64_t marked,
                               std::int64_t observed_set_size);

BigInt binomial_coefficient(std::int64_t n, std::int64_t k);

/// sqrt(p (1 - p) / n), the sampling sd of a proportion. Throws BadArgument
/// when n < 1 or p is outside [0, 1].
double proportion_sigma(double p, std::int64_t n);

}  // namespace ef

#endif  // EF_PROBKIT_HPP_
