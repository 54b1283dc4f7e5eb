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

#include "ef/probkit.hpp"

#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "ef/error.hpp"

namespace ef {

namespace {

BigInt pow10(std::int64_t e) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational make(const BigInt &num, const BigInt &den) { return Rational(num, den); }

}  // namespace

Rational parse_decimal(std::string_view text) {
  const auto bad = [&] { fail(ErrorCode::kBadArgument, fmt::format("not a decimal number: '{}'", text)); };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  BigInt digits = 0;
  std::int64_t scale = 0;
  bool any = false, point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any = true;
      if (point) ++scale;
    } else if (c == '.' && !point) {
      point = true;
    } else {
      break;
    }
  }
  if (!any) bad();
  std::int64_t exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
    bool exp_any = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exponent = exponent * 10 + (text[i] - '0');
      exp_any = true;
      if (exponent > 100000) bad();
    }
    if (!exp_any) bad();
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) bad();
  const std::int64_t net = exponent - scale;
  Rational value = net >= 0 ? make(digits * pow10(net), 1) : make(digits, pow10(-net));
  return negative ? Rational(-value) : value;
}

Rational exact(double value) {
  if (!std::isfinite(value)) fail(ErrorCode::kBadArgument, "non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an integer for every double.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num = scaled;
  BigInt den = 1;
  if (exponent >= 0) {
    num <<= exponent;
  } else {
    den <<= -exponent;
  }
  return make(num, den);
}

std::string format_fraction(const Rational &value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_mixed(const Rational &value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  const BigInt whole = num / den;  // truncates toward zero
  if (den == 1 || whole == 0) return format_fraction(value);
  BigInt rest = num - whole * den;
  if (rest < 0) rest = -rest;
  return whole.str() + " " + rest.str() + "/" + den.str();
}

double to_double(const Rational &value) {
  BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;
  // Scale to a 55-bit quotient with a sticky bit; the final integer-to-double
  // conversion then rounds to nearest even. Subnormal results may round twice.
  const auto shift = 55 - (static_cast<std::int64_t>(boost::multiprecision::msb(num)) -
                           static_cast<std::int64_t>(boost::multiprecision::msb(den)));
  BigInt n = num, d = den;
  if (shift >= 0) {
    n <<= shift;
  } else {
    d <<= -shift;
  }
  BigInt q = n / d;
  if (q * d != n) q |= 1;
  const double r = std::ldexp(static_cast<double>(q.convert_to<std::uint64_t>()), static_cast<int>(-shift));
  return negative ? -r : r;
}

std::string format_significant(const Rational &value, int digits) {
  if (digits < 1) fail(ErrorCode::kBadArgument, "digits must be >= 1");
  BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (num == 0) return "0";
  const bool negative = num < 0;
  if (negative) num = -num;
  // Find e with 10^(digits-1) <= num/den * 10^-e < 10^digits.
  std::int64_t e = static_cast<std::int64_t>(num.str().size()) -
                   static_cast<std::int64_t>(den.str().size()) - digits + 1;
  const auto scaled = [&](std::int64_t shift, BigInt &q, BigInt &r) {
    BigInt n = num, d = den;
    if (shift >= 0) {
      d *= pow10(shift);
    } else {
      n *= pow10(-shift);
    }
    q = n / d;
    r = n - q * d;
    return d;
  };
  BigInt q, r, d;
  for (;;) {
    d = scaled(e, q, r);
    if (q < pow10(digits - 1)) {
      --e;
    } else if (q >= pow10(digits)) {
      ++e;
    } else {
      break;
    }
  }
  // Round half to even.
  if (2 * r > d || (2 * r == d && q % 2 == 1)) ++q;
  if (q >= pow10(digits)) {
    q /= 10;
    ++e;
  }
  std::string s = q.str();
  std::string out;
  if (e >= 0) {
    out = s + std::string(static_cast<std::size_t>(e), '0');
  } else if (static_cast<std::int64_t>(s.size()) > -e) {
    const auto point = s.size() - static_cast<std::size_t>(-e);
    out = s.substr(0, point) + "." + s.substr(point);
  } else {
    out = "0." + std::string(static_cast<std::size_t>(-e) - s.size(), '0') + s;
  }
  return negative ? "-" + out : out;
}

OddsResult posterior_odds(const Rational &likelihood_a, const Rational &prior_a,
                          const Rational &likelihood_b, const Rational &prior_b,
                          std::string label_a, std::string label_b) {
  for (const Rational *v : {&likelihood_a, &prior_a, &likelihood_b, &prior_b}) {
    if (*v <= 0 || *v > 1) {
      fail(ErrorCode::kNonPositiveInput,
           fmt::format("probabilities must lie in (0, 1], got {}", format_fraction(*v)));
    }
  }
  OddsResult out;
  out.ratio = (likelihood_b * prior_b) / (likelihood_a * prior_a);
  if (out.ratio > 1) {
    out.favored = std::move(label_b);
  } else if (out.ratio < 1) {
    out.favored = std::move(label_a);
  } else {
    out.favored = "neither";
  }
  return out;
}

double run_probability(double p, std::uint64_t n) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kBadArgument, "p must lie in [0, 1]");
  double result = 1.0;
  double base = p;
  for (; n > 0; n >>= 1) {
    if (n & 1) result *= base;
    base *= base;
  }
  return result;
}

Rational run_probability_exact(const Rational &p, std::uint64_t n) {
  if (p < 0 || p > 1) fail(ErrorCode::kBadArgument, "p must lie in [0, 1]");
  Rational result = 1;
  Rational base = p;
  for (; n > 0; n >>= 1) {
    if (n & 1) result *= base;
    if (n > 1) base *= base;
  }
  return result;
}

BigInt binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::optional<Rational> Coincidence::fraction() const {
  if (!subsets) return std::nullopt;
  return make(1, *subsets);
}

Coincidence subset_coincidence(std::int64_t total, std::int64_t marked,
                               std::int64_t observed_set_size) {
  if (total < 0 || marked < 0 || marked > total || observed_set_size != marked) {
    fail(ErrorCode::kBadCounts,
         fmt::format("need 0 <= marked == observed_set_size <= total, got total={} marked={} "
                     "observed_set_size={}",
                     total, marked, observed_set_size));
  }
  Coincidence out;
  out.total = total;
  out.marked = marked;
  if (total <= kExactBinomialLimit) {
    out.subsets = binomial_coefficient(total, marked);
    out.exact = true;
    const Rational p = make(1, *out.subsets);
    out.probability = to_double(p);
    const auto digits = static_cast<double>(out.subsets->str().size());
    // log10 of a big integer: leading 17 digits plus the digit count.
    const std::string s = out.subsets->str();
    const double lead = std::stod(s.substr(0, std::min<std::size_t>(17, s.size())));
    out.log10_probability =
        -(std::log10(lead) + digits - static_cast<double>(std::min<std::size_t>(17, s.size())));
  } else {
    const auto n = static_cast<double>(total);
    const auto k = static_cast<double>(marked);
    const double ln_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    out.log10_probability = -ln_c / std::log(10.0);
    out.probability = std::exp(-ln_c);
  }
  return out;
}

double proportion_sigma(double p, std::int64_t n) {
  if (n < 1) fail(ErrorCode::kBadArgument, "n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kBadArgument, "p must lie in [0, 1]");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace ef
