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

#ifndef EF_COMPARE_HPP_
#define EF_COMPARE_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ef/dataset.hpp"

namespace ef {

// ---------------------------------------------------------------------------
// Subset contrast

struct SubsetContrast {
  std::string label_a;
  std::string label_b;
  std::size_t precincts_a = 0;
  std::size_t precincts_b = 0;
  std::vector<double> share_a;  // aggregate votes / ballots, per party
  std::vector<double> share_b;
  double turnout_a = 0.0;  // aggregate ballots / registered
  double turnout_b = 0.0;
  std::vector<double> share_difference_points;  // 100 * (b - a)
  double turnout_difference_points = 0.0;
  double ks_turnout = 0.0;
};

/// Two-sample Kolmogorov-Smirnov statistic sup_t |F_a(t) - F_b(t)|; 0 when
/// either sample is empty.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Throws RosterMismatch unless both datasets share a roster.
SubsetContrast subset_contrast(const ElectionDataset &a, const ElectionDataset &b,
                               std::string label_a = "a", std::string label_b = "b");

// ---------------------------------------------------------------------------
// Cross-election deltas. Percent values are held as integer hundredths of a
// point so differences are exact.

using Centipoints = std::int64_t;

/// Parses "50.93", "50.93%", "-3.68" or "19" into hundredths; more than two
/// decimals is an error.
std::optional<Centipoints> parse_centipoints(std::string_view text);
std::string format_centipoints(Centipoints value, bool explicit_sign = false);

struct UnitRow {
  std::string unit;
  Centipoints share = 0;
  Centipoints turnout = 0;
};

struct DeltaRow {
  std::string unit;
  Centipoints share_b = 0, share_a = 0;
  Centipoints turnout_b = 0, turnout_a = 0;
  Centipoints share_delta = 0;    // b - a
  Centipoints turnout_delta = 0;  // b - a

  static double points(Centipoints v) { return static_cast<double>(v) / 100.0; }
};

/// Joins on unit name (rows in the order of `table_a`); throws UnitMismatch unless the
/// unit sets match one-to-one.
std::vector<DeltaRow> cross_election_delta(std::span<const UnitRow> table_a,
                                           std::span<const UnitRow> table_b);

/// `unit,share,turnout` rows.
std::vector<UnitRow> parse_unit_table(std::string_view csv_text);

/// `unit,share_b,share_a,turnout_b,turnout_a` rows, the layout of a
/// side-by-side before/after table. Returns (table_a, table_b).
std::pair<std::vector<UnitRow>, std::vector<UnitRow>> parse_paired_unit_table(
    std::string_view csv_text);

// ---------------------------------------------------------------------------
// Observer protocol vs official data

struct ProtocolPair {
  PrecinctRecord observer;
  PrecinctRecord official;
};

struct ProtocolDisplacement {
  std::string precinct_id;
  double from_turnout = 0, from_share = 0;  // observer
  double to_turnout = 0, to_share = 0;      // official
  double delta_turnout = 0, delta_share = 0;  // official - observer
};

struct DisplacementSummary {
  std::vector<ProtocolDisplacement> rows;  // ordered by precinct id
  double mean_delta_turnout = 0.0;
  double mean_delta_share = 0.0;
};

/// Throws PairMismatch when a pair disagrees on precinct id or registered.
DisplacementSummary protocol_displacements(std::span<const ProtocolPair> pairs,
                                           std::size_t leader);

/// protocols.csv:
/// precinct_id,source,registered,ballots_cast,invalid,votes_<party>...
/// with source in {observer, official}. Every precinct needs both sources.
struct ProtocolFile {
  PartyRoster roster;
  std::vector<ProtocolPair> pairs;
};
ProtocolFile parse_protocols(std::string_view csv_text);

// ---------------------------------------------------------------------------
// Paired contests held at the same precincts

struct ContestGap {
  std::string precinct_id;
  Count votes_a = 0;
  Count votes_b = 0;
  Count gap = 0;  // positive magnitude
};

struct PairedScan {
  Count threshold = 300;
  std::string party;
  std::size_t shared_precincts = 0;
  std::vector<ContestGap> a_over_b;
  std::vector<ContestGap> b_over_a;
};

inline constexpr Count kNoThreshold = std::numeric_limits<Count>::max();

/// Precincts present in both contests where |votes_a - votes_b| > threshold
/// for `party` (leader of `a` when empty). Ordered by precinct id.
PairedScan paired_contest_scan(const ElectionDataset &a, const ElectionDataset &b,
                               Count threshold = 300, std::string_view party = {});

}  // namespace ef

#endif  // EF_COMPARE_HPP_
