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

#ifndef EF_RNG_HPP_
#define EF_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ef {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: the same (seed, stream, index) always gives
/// the same sub-seed, so work split across threads reproduces sequential runs.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(mix64(seed) ^ stream) + index);
}

// Streams used by the library. Distinct streams keep sub-seeds of unrelated
// consumers from colliding when they share a master seed.
enum SeedStream : std::uint64_t {
  kStreamHonest = 0x686f6e657374ULL,
  kStreamFraud = 0x6672617564ULL,
  kStreamNull = 0x6e756c6cULL,
  kStreamCluster = 0x636c7573ULL,
};

/// Random source with distribution code written out explicitly; the standard
/// <random> distributions are implementation-defined and would make outputs
/// differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  double lognormal(double log_mean, double log_sd) {
    return std::exp(normal(log_mean, log_sd));
  }

  /// Exact binomial draw by inversion ordered outward from the mode.
  std::int64_t binomial(std::int64_t n, double p);

  /// Sequential-conditional multinomial; `probs` need not sum to one, the
  /// residual mass is an implicit last category that is not returned.
  std::vector<std::int64_t> multinomial(std::int64_t n,
                                        std::span<const double> probs);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ef

#endif  // EF_RNG_HPP_
