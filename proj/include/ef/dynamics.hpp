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

#ifndef EF_DYNAMICS_HPP_
#define EF_DYNAMICS_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ef/dataset.hpp"

namespace ef {

/// Minutes after midnight.
struct ClockTime {
  int minutes = 0;

  static std::optional<ClockTime> parse(std::string_view hh_mm);
  std::string to_string() const;
  auto operator<=>(const ClockTime &) const = default;
};

struct TurnoutReport {
  ClockTime time;
  Count cumulative = 0;

  bool operator==(const TurnoutReport &) const = default;
};

/// Cumulative voter counts reported during the day, ordered by time and
/// non-decreasing.
struct IntradaySeries {
  std::string precinct_id;
  std::vector<TurnoutReport> reports;

  bool operator==(const IntradaySeries &) const = default;
};

using SeriesMap = std::map<std::string, IntradaySeries, std::less<>>;

/// intraday.csv: `precinct_id,time,cumulative_voted`, time as HH:MM. Rows may
/// come in any order; a series that decreases in time or repeats a time is a
/// MalformedRow.
SeriesMap parse_intraday(std::string_view csv_text);
std::string serialize_intraday(const SeriesMap &series);

/// (official ballots_cast - last reported cumulative) / registered.
/// Throws EmptySeries with fewer than two reports and InvariantViolation when
/// the last report exceeds the official count.
double final_increment(const IntradaySeries &series, Count official_cast, Count registered);

struct HyperactivePoint {
  std::string precinct_id;
  double turnout = 0.0;
  double leader_share = 0.0;  // of cast
  double increment = 0.0;
  bool flagged = false;
};

struct HyperactiveReport {
  double threshold = 0.13;
  std::vector<std::string> flagged;          // sorted
  std::vector<std::string> missing_series;   // sorted; skipped, not fatal
  std::vector<std::string> warnings;
  std::vector<HyperactivePoint> points;      // precincts with a series, dataset order
};

inline constexpr double kDefaultHyperactiveThreshold = 0.13;

/// Flags precincts whose final increment strictly exceeds `threshold`
/// (which must lie in (0, 1)). Precincts without a usable series are
/// reported and skipped.
HyperactiveReport flag_hyperactive(const ElectionDataset &dataset, const SeriesMap &series,
                                   double threshold = kDefaultHyperactiveThreshold);

}  // namespace ef

#endif  // EF_DYNAMICS_HPP_
