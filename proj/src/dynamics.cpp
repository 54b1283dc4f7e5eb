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

#include "ef/dynamics.hpp"

#include <algorithm>

#include "ef/csv.hpp"
#include "ef/error.hpp"

namespace ef {

std::optional<ClockTime> ClockTime::parse(std::string_view text) {
  if (text.size() != 5 || text[2] != ':') return std::nullopt;
  const auto hours = csv::parse_count(text.substr(0, 2));
  const auto minutes = csv::parse_count(text.substr(3, 2));
  if (!hours || !minutes || *hours > 23 || *minutes > 59) return std::nullopt;
  return ClockTime{static_cast<int>(*hours * 60 + *minutes)};
}

std::string ClockTime::to_string() const {
  std::string out(5, '0');
  out[0] = static_cast<char>('0' + minutes / 600);
  out[1] = static_cast<char>('0' + (minutes / 60) % 10);
  out[2] = ':';
  out[3] = static_cast<char>('0' + (minutes % 60) / 10);
  out[4] = static_cast<char>('0' + minutes % 10);
  return out;
}

SeriesMap parse_intraday(std::string_view csv_text) {
  const auto rows = csv::read_rows(csv_text);
  if (rows.empty()) fail(ErrorCode::kMalformedRow, "line 1: missing header row");
  const auto &header = rows.front().fields;
  if (header != std::vector<std::string>{"precinct_id", "time", "cumulative_voted"}) {
    fail(ErrorCode::kMalformedRow, "line 1: expected header precinct_id,time,cumulative_voted");
  }
  SeriesMap out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const auto where = "line " + std::to_string(row.line) + ": ";
    if (row.fields.size() != 3) fail(ErrorCode::kMalformedRow, where + "expected 3 fields");
    const auto time = ClockTime::parse(row.fields[1]);
    if (!time) fail(ErrorCode::kMalformedRow, where + "time must be HH:MM, got '" + row.fields[1] + "'");
    const auto count = csv::parse_count(row.fields[2]);
    if (!count) fail(ErrorCode::kMalformedRow, where + "bad cumulative_voted '" + row.fields[2] + "'");
    auto &series = out[row.fields[0]];
    series.precinct_id = row.fields[0];
    series.reports.push_back({*time, *count});
  }
  for (auto &[id, series] : out) {
    auto &reports = series.reports;
    std::stable_sort(reports.begin(), reports.end(),
                     [](const auto &a, const auto &b) { return a.time < b.time; });
    for (std::size_t i = 1; i < reports.size(); ++i) {
      if (reports[i].time == reports[i - 1].time) {
        fail(ErrorCode::kMalformedRow, id + ": repeated report time " + reports[i].time.to_string());
      }
      if (reports[i].cumulative < reports[i - 1].cumulative) {
        fail(ErrorCode::kMalformedRow,
             id + ": cumulative count decreases at " + reports[i].time.to_string());
      }
    }
  }
  return out;
}

std::string serialize_intraday(const SeriesMap &series) {
  std::string out = "precinct_id,time,cumulative_voted\n";
  for (const auto &[id, s] : series) {
    for (const auto &r : s.reports) {
      out += csv::quote(id);
      out += ',';
      out += r.time.to_string();
      out += ',';
      out += std::to_string(r.cumulative);
      out += '\n';
    }
  }
  return out;
}

double final_increment(const IntradaySeries &series, Count official_cast, Count registered) {
  if (series.reports.size() < 2) {
    fail(ErrorCode::kEmptySeries, series.precinct_id + ": needs at least two intraday reports");
  }
  if (registered <= 0) fail(ErrorCode::kZeroRegistered, series.precinct_id + ": registered is 0");
  const Count last = series.reports.back().cumulative;
  if (last > official_cast) {
    fail(ErrorCode::kInvariantViolation,
         series.precinct_id + ": last intraday count exceeds official ballots_cast");
  }
  return static_cast<double>(official_cast - last) / static_cast<double>(registered);
}

HyperactiveReport flag_hyperactive(const ElectionDataset &dataset, const SeriesMap &series,
                                   double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    fail(ErrorCode::kBadArgument, "hyperactive threshold must lie in (0, 1)");
  }
  HyperactiveReport report;
  report.threshold = threshold;
  for (const auto &r : dataset.records()) {
    const auto it = series.find(r.precinct_id);
    if (it == series.end()) {
      report.missing_series.push_back(r.precinct_id);
      continue;
    }
    double increment = 0.0;
    try {
      increment = final_increment(it->second, r.ballots_cast, r.registered);
    } catch (const Error &e) {
      report.missing_series.push_back(r.precinct_id);
      report.warnings.push_back(std::string(to_string(e.code())) + ": " + e.what());
      continue;
    }
    HyperactivePoint p;
    p.precinct_id = r.precinct_id;
    p.turnout = static_cast<double>(r.ballots_cast) / static_cast<double>(r.registered);
    p.leader_share = r.ballots_cast > 0 ? static_cast<double>(r.votes[dataset.leader()]) /
                                              static_cast<double>(r.ballots_cast)
                                        : 0.0;
    p.increment = increment;
    p.flagged = increment > threshold;
    if (p.flagged) report.flagged.push_back(r.precinct_id);
    report.points.push_back(std::move(p));
  }
  std::sort(report.flagged.begin(), report.flagged.end());
  std::sort(report.missing_series.begin(), report.missing_series.end());
  if (!report.missing_series.empty()) {
    report.warnings.push_back(std::string(to_string(ErrorCode::kMissingSeries)) + ": " +
                              std::to_string(report.missing_series.size()) +
                              " precinct(s) skipped without a usable intraday series");
  }
  return report;
}

}  // namespace ef
