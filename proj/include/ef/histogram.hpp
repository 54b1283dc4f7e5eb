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

#ifndef EF_HISTOGRAM_HPP_
#define EF_HISTOGRAM_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ef/dataset.hpp"

namespace ef {

inline constexpr int kPercentBins = 101;

/// Which per-precinct fraction is histogrammed. For party shares the
/// denominator is ballots_cast; for turnout it is registered.
struct Quantity {
  enum class Kind { kTurnout, kPartyShare };
  Kind kind = Kind::kTurnout;
  std::optional<std::size_t> party;  // unset with kPartyShare = leader

  static Quantity turnout() { return {Kind::kTurnout, std::nullopt}; }
  static Quantity leader_share() { return {Kind::kPartyShare, std::nullopt}; }
  static Quantity party_share(std::size_t index) { return {Kind::kPartyShare, index}; }

  /// "turnout", "leader_share_of_cast" or "share_of_cast:<party>".
  std::string label(const ElectionDataset &dataset) const;
};

/// Parses "turnout", "leader_share" / "leader_share_of_cast", or a party id.
Quantity parse_quantity(std::string_view text, const ElectionDataset &dataset);

enum class WeightMode { kPrecincts, kRegistered, kBallots };

/// How an exact fraction k/n becomes an integer percent. kHalfUp is the
/// default; kTruncate (floor of the percent) is how many published charts
/// bin raw fractions and is kept for reproducing them.
enum class Binning { kHalfUp, kTruncate };

std::string_view to_string(WeightMode mode);
std::string_view to_string(Binning binning);
WeightMode parse_weight_mode(std::string_view text);
Binning parse_binning(std::string_view text);

/// Integer percent bin of k/n (n > 0, 0 <= k <= n), computed in integer
/// arithmetic so boundaries are exact.
constexpr int percent_bin(Count k, Count n, Binning binning) {
  if (binning == Binning::kHalfUp) return static_cast<int>((200 * k + n) / (2 * n));
  return static_cast<int>((100 * k) / n);
}

/// (numerator, denominator) of the histogrammed fraction for one precinct, or
/// nullopt when the precinct is excluded (share with nothing cast).
std::optional<std::pair<Count, Count>> quantity_fraction(const PrecinctRecord &record,
                                                         const Quantity &quantity,
                                                         std::size_t leader);

Count unit_weight(const PrecinctRecord &record, WeightMode mode);

struct IntegerPercentHistogram {
  std::string label;
  WeightMode weight_mode = WeightMode::kPrecincts;
  Binning binning = Binning::kHalfUp;
  std::array<Count, kPercentBins> bins{};
  std::size_t included_precincts = 0;
  Count included_weight = 0;

  Count total() const;
};

IntegerPercentHistogram integer_percent_histogram(const ElectionDataset &dataset,
                                                  const Quantity &quantity,
                                                  WeightMode weight_mode = WeightMode::kPrecincts,
                                                  Binning binning = Binning::kHalfUp);

struct TurnoutBinTable {
  PartyRoster roster;
  std::size_t leader = 0;
  double bin_width = 0.01;
  std::size_t bin_count = 100;
  std::vector<std::vector<Count>> votes;  // [bin][party]
  std::vector<Count> precincts;           // [bin]
  std::vector<Count> ballots;             // [bin]
  std::vector<Count> registered;          // [bin]

  double bin_lo(std::size_t b) const { return static_cast<double>(b) * bin_width; }
  double bin_hi(std::size_t b) const { return static_cast<double>(b + 1) * bin_width; }
  std::vector<Count> party_totals() const;
  Count total_ballots() const;
};

/// Assigns each precinct's votes wholly to the turnout bin containing
/// ballots_cast / registered; turnout 1.0 goes to the last bin. Throws
/// BadBinWidth unless 1 / bin_width is an integer.
TurnoutBinTable turnout_bin_table(const ElectionDataset &dataset, double bin_width = 0.01);

}  // namespace ef

#endif  // EF_HISTOGRAM_HPP_
