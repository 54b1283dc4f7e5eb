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

#include "ef/compare.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ef/csv.hpp"
#include "ef/error.hpp"

namespace ef {

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return 0.0;
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto na = static_cast<double>(sa.size());
  const auto nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double v;
    if (i == sa.size()) {
      v = sb[j];
    } else if (j == sb.size()) {
      v = sa[i];
    } else {
      v = std::min(sa[i], sb[j]);
    }
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

SubsetContrast subset_contrast(const ElectionDataset &a, const ElectionDataset &b,
                               std::string label_a, std::string label_b) {
  if (!(a.roster() == b.roster())) {
    fail(ErrorCode::kRosterMismatch, "subsets have different party rosters");
  }
  SubsetContrast c;
  c.label_a = std::move(label_a);
  c.label_b = std::move(label_b);
  c.precincts_a = a.size();
  c.precincts_b = b.size();

  auto aggregate = [](const ElectionDataset &d, std::vector<double> &shares, double &turnout) {
    const auto totals = d.party_totals();
    const Count cast = d.total_cast();
    const Count registered = d.total_registered();
    shares.clear();
    for (Count v : totals) {
      shares.push_back(cast > 0 ? static_cast<double>(v) / static_cast<double>(cast) : 0.0);
    }
    turnout = registered > 0 ? static_cast<double>(cast) / static_cast<double>(registered) : 0.0;
  };
  aggregate(a, c.share_a, c.turnout_a);
  aggregate(b, c.share_b, c.turnout_b);
  for (std::size_t p = 0; p < c.share_a.size(); ++p) {
    c.share_difference_points.push_back(100.0 * (c.share_b[p] - c.share_a[p]));
  }
  c.turnout_difference_points = 100.0 * (c.turnout_b - c.turnout_a);

  auto turnouts = [](const ElectionDataset &d) {
    std::vector<double> out;
    out.reserve(d.size());
    for (const auto &r : d.records()) {
      out.push_back(static_cast<double>(r.ballots_cast) / static_cast<double>(r.registered));
    }
    return out;
  };
  c.ks_turnout = ks_statistic(turnouts(a), turnouts(b));
  return c;
}

// ---------------------------------------------------------------------------

std::optional<Centipoints> parse_centipoints(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '%')) text.remove_suffix(1);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const auto whole_text = text.substr(0, dot);
  std::string_view frac_text = dot == std::string_view::npos ? "" : text.substr(dot + 1);
  if (whole_text.empty() || frac_text.size() > 2) return std::nullopt;
  if (dot != std::string_view::npos && frac_text.empty()) return std::nullopt;
  const auto whole = csv::parse_count(whole_text);
  if (!whole) return std::nullopt;
  Centipoints frac = 0;
  if (!frac_text.empty()) {
    const auto parsed = csv::parse_count(frac_text);
    if (!parsed) return std::nullopt;
    frac = *parsed * (frac_text.size() == 1 ? 10 : 1);
  }
  const Centipoints value = *whole * 100 + frac;
  return negative ? -value : value;
}

std::string format_centipoints(Centipoints value, bool explicit_sign) {
  std::string sign;
  if (value < 0) {
    sign = "-";
  } else if (explicit_sign && value > 0) {
    sign = "+";
  }
  const Centipoints magnitude = value < 0 ? -value : value;
  std::string frac = std::to_string(magnitude % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return sign + std::to_string(magnitude / 100) + "." + frac;
}

std::vector<DeltaRow> cross_election_delta(std::span<const UnitRow> table_a,
                                           std::span<const UnitRow> table_b) {
  std::map<std::string, const UnitRow *> a_by_unit, b_by_unit;
  for (const auto &r : table_a) {
    if (!a_by_unit.emplace(r.unit, &r).second) {
      fail(ErrorCode::kUnitMismatch, "duplicate unit '" + r.unit + "' in first table");
    }
  }
  for (const auto &r : table_b) {
    if (!b_by_unit.emplace(r.unit, &r).second) {
      fail(ErrorCode::kUnitMismatch, "duplicate unit '" + r.unit + "' in second table");
    }
  }
  for (const auto &[unit, row] : a_by_unit) {
    if (!b_by_unit.contains(unit)) {
      fail(ErrorCode::kUnitMismatch, "unit '" + unit + "' missing from second table");
    }
  }
  for (const auto &[unit, row] : b_by_unit) {
    if (!a_by_unit.contains(unit)) {
      fail(ErrorCode::kUnitMismatch, "unit '" + unit + "' missing from first table");
    }
  }
  std::vector<DeltaRow> rows;
  for (const auto &row : table_a) {
    const UnitRow *ra = &row;
    const std::string &unit = row.unit;
    const UnitRow *rb = b_by_unit.at(unit);
    DeltaRow d;
    d.unit = unit;
    d.share_a = ra->share;
    d.share_b = rb->share;
    d.turnout_a = ra->turnout;
    d.turnout_b = rb->turnout;
    d.share_delta = d.share_b - d.share_a;
    d.turnout_delta = d.turnout_b - d.turnout_a;
    rows.push_back(std::move(d));
  }
  return rows;
}

namespace {

Centipoints percent_field(const csv::Row &row, std::size_t column) {
  const auto value = parse_centipoints(row.fields[column]);
  if (!value) {
    fail(ErrorCode::kMalformedRow, "line " + std::to_string(row.line) +
                                       ": not a percentage with at most two decimals: '" +
                                       row.fields[column] + "'");
  }
  return *value;
}

std::vector<csv::Row> rows_with_header(std::string_view csv_text,
                                       std::initializer_list<std::string_view> header) {
  auto rows = csv::read_rows(csv_text);
  if (rows.empty()) fail(ErrorCode::kMalformedRow, "line 1: missing header row");
  const auto &got = rows.front().fields;
  if (got.size() != header.size() || !std::equal(header.begin(), header.end(), got.begin())) {
    std::string expected;
    for (auto h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
    fail(ErrorCode::kMalformedRow, "line 1: expected header '" + expected + "'");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].fields.size() != header.size()) {
      fail(ErrorCode::kMalformedRow, "line " + std::to_string(rows[i].line) + ": expected " +
                                         std::to_string(header.size()) + " fields");
    }
  }
  rows.erase(rows.begin());
  return rows;
}

}  // namespace

std::vector<UnitRow> parse_unit_table(std::string_view csv_text) {
  std::vector<UnitRow> out;
  for (const auto &row : rows_with_header(csv_text, {"unit", "share", "turnout"})) {
    out.push_back({row.fields[0], percent_field(row, 1), percent_field(row, 2)});
  }
  return out;
}

std::pair<std::vector<UnitRow>, std::vector<UnitRow>> parse_paired_unit_table(
    std::string_view csv_text) {
  std::vector<UnitRow> a, b;
  for (const auto &row : rows_with_header(
           csv_text, {"unit", "share_b", "share_a", "turnout_b", "turnout_a"})) {
    b.push_back({row.fields[0], percent_field(row, 1), percent_field(row, 3)});
    a.push_back({row.fields[0], percent_field(row, 2), percent_field(row, 4)});
  }
  return {std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------

DisplacementSummary protocol_displacements(std::span<const ProtocolPair> pairs,
                                           std::size_t leader) {
  DisplacementSummary summary;
  for (const auto &pair : pairs) {
    const auto &obs = pair.observer;
    const auto &off = pair.official;
    if (obs.precinct_id != off.precinct_id) {
      fail(ErrorCode::kPairMismatch,
           "paired records disagree on precinct: " + obs.precinct_id + " vs " + off.precinct_id);
    }
    if (obs.registered != off.registered) {
      fail(ErrorCode::kPairMismatch, obs.precinct_id + ": registered differs between sources");
    }
    if (obs.registered <= 0) fail(ErrorCode::kZeroRegistered, obs.precinct_id + ": registered is 0");
    auto share = [leader](const PrecinctRecord &r) {
      return r.ballots_cast > 0
                 ? static_cast<double>(r.votes.at(leader)) / static_cast<double>(r.ballots_cast)
                 : 0.0;
    };
    ProtocolDisplacement d;
    d.precinct_id = obs.precinct_id;
    d.from_turnout = static_cast<double>(obs.ballots_cast) / static_cast<double>(obs.registered);
    d.to_turnout = static_cast<double>(off.ballots_cast) / static_cast<double>(off.registered);
    d.from_share = share(obs);
    d.to_share = share(off);
    d.delta_turnout = d.to_turnout - d.from_turnout;
    d.delta_share = d.to_share - d.from_share;
    summary.rows.push_back(std::move(d));
  }
  std::sort(summary.rows.begin(), summary.rows.end(),
            [](const auto &x, const auto &y) { return x.precinct_id < y.precinct_id; });
  if (!summary.rows.empty()) {
    double st = 0, ss = 0;
    for (const auto &r : summary.rows) {
      st += r.delta_turnout;
      ss += r.delta_share;
    }
    const auto n = static_cast<double>(summary.rows.size());
    summary.mean_delta_turnout = st / n;
    summary.mean_delta_share = ss / n;
  }
  return summary;
}

ProtocolFile parse_protocols(std::string_view csv_text) {
  const auto rows = csv::read_rows(csv_text);
  if (rows.empty()) fail(ErrorCode::kMalformedRow, "line 1: missing header row");
  const auto &header = rows.front().fields;
  constexpr std::string_view fixed[] = {"precinct_id", "source", "registered", "ballots_cast",
                                        "invalid"};
  constexpr std::size_t kFixed = std::size(fixed);
  if (header.size() <= kFixed || !std::equal(std::begin(fixed), std::end(fixed), header.begin())) {
    fail(ErrorCode::kMalformedRow,
         "line 1: expected header precinct_id,source,registered,ballots_cast,invalid,votes_...");
  }
  std::vector<std::string> parties;
  for (std::size_t i = kFixed; i < header.size(); ++i) {
    if (!header[i].starts_with("votes_") || header[i].size() == 6) {
      fail(ErrorCode::kMalformedRow, "line 1: unexpected column '" + header[i] + "'");
    }
    parties.push_back(header[i].substr(6));
  }
  ProtocolFile file{PartyRoster(std::move(parties)), {}};

  std::map<std::string, std::pair<std::optional<PrecinctRecord>, std::optional<PrecinctRecord>>>
      by_id;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const auto where = "line " + std::to_string(row.line) + ": ";
    if (row.fields.size() != header.size()) {
      fail(ErrorCode::kMalformedRow, where + "expected " + std::to_string(header.size()) + " fields");
    }
    auto count = [&](std::size_t column) {
      const auto v = csv::parse_count(row.fields[column]);
      if (!v) fail(ErrorCode::kMalformedRow, where + "bad count in column '" + header[column] + "'");
      return *v;
    };
    PrecinctRecord rec;
    rec.precinct_id = row.fields[0];
    rec.registered = count(2);
    rec.ballots_cast = count(3);
    rec.invalid_ballots = count(4);
    for (std::size_t p = 0; p < file.roster.size(); ++p) rec.votes.push_back(count(kFixed + p));
    if (auto broken = check_record(rec)) {
      fail(ErrorCode::kInvariantViolation, rec.precinct_id + ": " + *broken);
    }
    auto &slot = by_id[rec.precinct_id];
    const auto &source = row.fields[1];
    auto &target = source == "observer" ? slot.first : slot.second;
    if (source != "observer" && source != "official") {
      fail(ErrorCode::kMalformedRow, where + "source must be observer or official");
    }
    if (target) fail(ErrorCode::kPairMismatch, where + "duplicate " + source + " row");
    target = std::move(rec);
  }
  for (auto &[id, slot] : by_id) {
    if (!slot.first || !slot.second) {
      fail(ErrorCode::kPairMismatch, id + ": needs both observer and official rows");
    }
    file.pairs.push_back({std::move(*slot.first), std::move(*slot.second)});
  }
  return file;
}

// ---------------------------------------------------------------------------

PairedScan paired_contest_scan(const ElectionDataset &a, const ElectionDataset &b,
                               Count threshold, std::string_view party) {
  PairedScan scan;
  scan.threshold = threshold;
  scan.party = party.empty() ? a.leader_id() : std::string(party);
  const auto ia = a.roster().index_of(scan.party);
  const auto ib = b.roster().index_of(scan.party);
  if (!ia || !ib) fail(ErrorCode::kUnknownParty, "party '" + scan.party + "' missing from a contest");

  std::map<std::string_view, const PrecinctRecord *> b_by_id;
  for (const auto &r : b.records()) b_by_id.emplace(r.precinct_id, &r);
  std::vector<const PrecinctRecord *> shared;
  for (const auto &r : a.records()) {
    if (b_by_id.contains(r.precinct_id)) shared.push_back(&r);
  }
  std::sort(shared.begin(), shared.end(),
            [](auto *x, auto *y) { return x->precinct_id < y->precinct_id; });
  scan.shared_precincts = shared.size();
  for (const auto *ra : shared) {
    const auto *rb = b_by_id.at(ra->precinct_id);
    const Count va = ra->votes[*ia], vb = rb->votes[*ib];
    const Count diff = va - vb;
    if (threshold == kNoThreshold) continue;
    if (diff > threshold) scan.a_over_b.push_back({ra->precinct_id, va, vb, diff});
    if (-diff > threshold) scan.b_over_a.push_back({ra->precinct_id, va, vb, -diff});
  }
  return scan;
}

}  // namespace ef
