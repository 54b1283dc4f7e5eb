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

#include "ef/histogram.hpp"

#include <cmath>
#include <numeric>

#include "ef/error.hpp"

namespace ef {

std::string Quantity::label(const ElectionDataset &dataset) const {
  if (kind == Kind::kTurnout) return "turnout";
  if (!party || *party == dataset.leader()) return "leader_share_of_cast";
  return "share_of_cast:" + dataset.roster().id(*party);
}

Quantity parse_quantity(std::string_view text, const ElectionDataset &dataset) {
  if (text == "turnout") return Quantity::turnout();
  if (text == "leader_share" || text == "leader_share_of_cast") return Quantity::leader_share();
  if (text.starts_with("share_of_cast:")) text.remove_prefix(14);
  if (const auto index = dataset.roster().index_of(text)) return Quantity::party_share(*index);
  fail(ErrorCode::kUnknownParty, "unknown quantity or party '" + std::string(text) + "'");
}

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::kPrecincts: return "precincts";
    case WeightMode::kRegistered: return "registered";
    case WeightMode::kBallots: return "ballots";
  }
  return "precincts";
}

std::string_view to_string(Binning binning) {
  return binning == Binning::kHalfUp ? "half_up" : "truncate";
}

WeightMode parse_weight_mode(std::string_view text) {
  if (text == "precincts") return WeightMode::kPrecincts;
  if (text == "registered") return WeightMode::kRegistered;
  if (text == "ballots") return WeightMode::kBallots;
  fail(ErrorCode::kBadArgument, "unknown weight mode '" + std::string(text) + "'");
}

Binning parse_binning(std::string_view text) {
  if (text == "half_up") return Binning::kHalfUp;
  if (text == "truncate") return Binning::kTruncate;
  fail(ErrorCode::kBadArgument, "unknown binning '" + std::string(text) + "'");
}

std::optional<std::pair<Count, Count>> quantity_fraction(const PrecinctRecord &record,
                                                         const Quantity &quantity,
                                                         std::size_t leader) {
  if (quantity.kind == Quantity::Kind::kTurnout) {
    return std::pair{record.ballots_cast, record.registered};
  }
  if (record.ballots_cast == 0) return std::nullopt;
  return std::pair{record.votes.at(quantity.party.value_or(leader)), record.ballots_cast};
}

Count unit_weight(const PrecinctRecord &record, WeightMode mode) {
  switch (mode) {
    case WeightMode::kPrecincts: return 1;
    case WeightMode::kRegistered: return record.registered;
    case WeightMode::kBallots: return record.ballots_cast;
  }
  return 1;
}

Count IntegerPercentHistogram::total() const {
  return std::accumulate(bins.begin(), bins.end(), Count{0});
}

IntegerPercentHistogram integer_percent_histogram(const ElectionDataset &dataset,
                                                  const Quantity &quantity,
                                                  WeightMode weight_mode, Binning binning) {
  IntegerPercentHistogram h;
  h.label = quantity.label(dataset);
  h.weight_mode = weight_mode;
  h.binning = binning;
  for (const auto &r : dataset.records()) {
    const auto fraction = quantity_fraction(r, quantity, dataset.leader());
    if (!fraction) continue;
    const Count w = unit_weight(r, weight_mode);
    h.bins[percent_bin(fraction->first, fraction->second, binning)] += w;
    ++h.included_precincts;
    h.included_weight += w;
  }
  return h;
}

std::vector<Count> TurnoutBinTable::party_totals() const {
  std::vector<Count> totals(roster.size(), 0);
  for (const auto &row : votes) {
    for (std::size_t p = 0; p < row.size(); ++p) totals[p] += row[p];
  }
  return totals;
}

Count TurnoutBinTable::total_ballots() const {
  return std::accumulate(ballots.begin(), ballots.end(), Count{0});
}

TurnoutBinTable turnout_bin_table(const ElectionDataset &dataset, double bin_width) {
  if (!(bin_width > 0.0) || bin_width > 1.0) {
    fail(ErrorCode::kBadBinWidth, "bin width must be in (0, 1]");
  }
  const double inverse = 1.0 / bin_width;
  const double rounded = std::round(inverse);
  if (std::abs(inverse - rounded) > 1e-9 * rounded) {
    fail(ErrorCode::kBadBinWidth, "bin width must divide 1 into an integer number of bins");
  }
  TurnoutBinTable t;
  t.roster = dataset.roster();
  t.leader = dataset.leader();
  t.bin_count = static_cast<std::size_t>(rounded);
  t.bin_width = 1.0 / rounded;
  t.votes.assign(t.bin_count, std::vector<Count>(t.roster.size(), 0));
  t.precincts.assign(t.bin_count, 0);
  t.ballots.assign(t.bin_count, 0);
  t.registered.assign(t.bin_count, 0);
  const auto bins = static_cast<Count>(t.bin_count);
  for (const auto &r : dataset.records()) {
    // floor(turnout * bins) in integers; exact at bin boundaries.
    auto b = static_cast<std::size_t>(std::min(bins - 1, (r.ballots_cast * bins) / r.registered));
    for (std::size_t p = 0; p < r.votes.size(); ++p) t.votes[b][p] += r.votes[p];
    ++t.precincts[b];
    t.ballots[b] += r.ballots_cast;
    t.registered[b] += r.registered;
  }
  return t;
}

}  // namespace ef
