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

#include "ef/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "ef/csv.hpp"
#include "ef/error.hpp"

namespace ef {

namespace {

constexpr std::string_view kVotesPrefix = "votes_";
constexpr std::string_view kTagsColumn = "tags";
constexpr std::size_t kFixedColumns = 7;
constexpr std::string_view kFixedHeader[kFixedColumns] = {
    "precinct_id", "region",          "territory",      "registered",
    "ballots_cast", "invalid", "machine_counted"};

}  // namespace

PartyRoster::PartyRoster(std::vector<std::string> ids,
                         std::vector<std::string> display_names)
    : ids_(std::move(ids)), display_names_(std::move(display_names)) {
  if (ids_.empty()) fail(ErrorCode::kInvalidModel, "party roster is empty");
  std::unordered_set<std::string> seen;
  for (const auto &id : ids_) {
    if (id.empty()) fail(ErrorCode::kInvalidModel, "empty party identifier");
    if (!seen.insert(id).second) {
      fail(ErrorCode::kInvalidModel, "duplicate party identifier '" + id + "'");
    }
  }
  if (!display_names_.empty() && display_names_.size() != ids_.size()) {
    fail(ErrorCode::kInvalidModel, "display names do not match roster size");
  }
}

const std::string &PartyRoster::display_name(std::size_t i) const {
  if (!display_names_.empty() && !display_names_.at(i).empty()) {
    return display_names_[i];
  }
  return ids_.at(i);
}

std::optional<std::size_t> PartyRoster::index_of(std::string_view id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

Count PrecinctRecord::valid_votes() const {
  return std::accumulate(votes.begin(), votes.end(), Count{0});
}

std::optional<std::string> check_record(const PrecinctRecord &r) {
  if (r.registered < 0 || r.ballots_cast < 0 || r.invalid_ballots < 0) {
    return "counts must be non-negative";
  }
  for (Count v : r.votes) {
    if (v < 0) return "counts must be non-negative";
  }
  if (r.registered == 0) return "registered > 0";
  if (r.valid_votes() + r.invalid_ballots > r.ballots_cast) {
    return "sum(votes) + invalid <= ballots_cast";
  }
  if (r.ballots_cast > r.registered) return "ballots_cast <= registered";
  return std::nullopt;
}

ElectionDataset::ElectionDataset(std::string election_id, PartyRoster roster,
                                 std::vector<PrecinctRecord> records,
                                 std::string_view leader)
    : election_id_(std::move(election_id)),
      roster_(std::move(roster)),
      records_(std::move(records)) {
  const auto leader_index = roster_.index_of(leader);
  if (!leader_index) {
    fail(ErrorCode::kUnknownLeader,
         "leader '" + std::string(leader) + "' is not in the party roster");
  }
  leader_ = *leader_index;
  std::unordered_set<std::string_view> ids;
  ids.reserve(records_.size());
  for (const auto &r : records_) {
    if (!ids.insert(r.precinct_id).second) {
      fail(ErrorCode::kInvariantViolation,
           r.precinct_id + ": precinct_id must be unique");
    }
    if (r.votes.size() != roster_.size()) {
      fail(ErrorCode::kInvariantViolation,
           r.precinct_id + ": votes vector length must equal roster length");
    }
    if (auto broken = check_record(r)) {
      fail(ErrorCode::kInvariantViolation, r.precinct_id + ": " + *broken);
    }
  }
}

std::vector<Count> ElectionDataset::party_totals() const {
  std::vector<Count> totals(roster_.size(), 0);
  for (const auto &r : records_) {
    for (std::size_t p = 0; p < totals.size(); ++p) totals[p] += r.votes[p];
  }
  return totals;
}

Count ElectionDataset::total_cast() const {
  Count total = 0;
  for (const auto &r : records_) total += r.ballots_cast;
  return total;
}

Count ElectionDataset::total_registered() const {
  Count total = 0;
  for (const auto &r : records_) total += r.registered;
  return total;
}

const PrecinctRecord *ElectionDataset::find(std::string_view precinct_id) const {
  for (const auto &r : records_) {
    if (r.precinct_id == precinct_id) return &r;
  }
  return nullptr;
}

ShareView derive_shares(const PrecinctRecord &record) {
  if (record.registered <= 0) {
    fail(ErrorCode::kZeroRegistered,
         record.precinct_id + ": registered must be positive");
  }
  ShareView view;
  view.precinct_id = record.precinct_id;
  const auto registered = static_cast<double>(record.registered);
  const auto cast = static_cast<double>(record.ballots_cast);
  view.turnout = cast / registered;
  view.share_of_registered.reserve(record.votes.size());
  view.share_of_cast.reserve(record.votes.size());
  for (Count v : record.votes) {
    const auto votes = static_cast<double>(v);
    view.share_of_registered.push_back(votes / registered);
    view.share_of_cast.push_back(record.ballots_cast > 0 ? votes / cast : 0.0);
  }
  return view;
}

ElectionDataset parse_dataset(std::string_view csv_text, std::string_view leader,
                              std::string election_id) {
  const auto rows = csv::read_rows(csv_text);
  if (rows.empty()) fail(ErrorCode::kMalformedRow, "line 1: missing header row");

  const auto &header = rows.front().fields;
  if (header.size() < kFixedColumns + 1) {
    fail(ErrorCode::kMalformedRow, "line 1: header needs at least one votes_ column");
  }
  for (std::size_t i = 0; i < kFixedColumns; ++i) {
    if (header[i] != kFixedHeader[i]) {
      fail(ErrorCode::kMalformedRow, "line 1: expected column '" +
                                         std::string(kFixedHeader[i]) + "', got '" +
                                         header[i] + "'");
    }
  }
  std::vector<std::string> parties;
  bool has_tags = false;
  for (std::size_t i = kFixedColumns; i < header.size(); ++i) {
    std::string_view name = header[i];
    if (name == kTagsColumn && i + 1 == header.size()) {
      has_tags = true;
    } else if (name.starts_with(kVotesPrefix) && name.size() > kVotesPrefix.size()) {
      parties.emplace_back(name.substr(kVotesPrefix.size()));
    } else {
      fail(ErrorCode::kMalformedRow, "line 1: unexpected column '" + header[i] + "'");
    }
  }
  if (parties.empty()) {
    fail(ErrorCode::kMalformedRow, "line 1: header needs at least one votes_ column");
  }
  PartyRoster roster(std::move(parties));
  if (!roster.index_of(leader)) {
    fail(ErrorCode::kUnknownLeader,
         "leader '" + std::string(leader) + "' is not in the party roster");
  }

  std::vector<PrecinctRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const auto where = "line " + std::to_string(row.line) + ": ";
    if (row.fields.size() != header.size()) {
      fail(ErrorCode::kMalformedRow, where + "expected " + std::to_string(header.size()) +
                                         " fields, got " + std::to_string(row.fields.size()));
    }
    auto count = [&](std::size_t column) {
      const auto value = csv::parse_count(row.fields[column]);
      if (!value) {
        fail(ErrorCode::kMalformedRow, where + "column '" + header[column] +
                                           "' is not a non-negative integer: '" +
                                           row.fields[column] + "'");
      }
      return *value;
    };
    PrecinctRecord rec;
    rec.precinct_id = row.fields[0];
    if (rec.precinct_id.empty()) fail(ErrorCode::kMalformedRow, where + "empty precinct_id");
    rec.region = row.fields[1];
    rec.territory = row.fields[2];
    rec.registered = count(3);
    rec.ballots_cast = count(4);
    rec.invalid_ballots = count(5);
    const auto &flag = row.fields[6];
    if (flag != "0" && flag != "1") {
      fail(ErrorCode::kMalformedRow, where + "machine_counted must be 0 or 1, got '" + flag + "'");
    }
    rec.machine_counted = flag == "1";
    rec.votes.reserve(roster.size());
    for (std::size_t p = 0; p < roster.size(); ++p) rec.votes.push_back(count(kFixedColumns + p));
    if (has_tags && !row.fields.back().empty()) {
      std::string_view tags = row.fields.back();
      while (!tags.empty()) {
        const auto cut = tags.find(';');
        rec.tags.emplace_back(tags.substr(0, cut));
        if (cut == std::string_view::npos) break;
        tags.remove_prefix(cut + 1);
      }
    }
    records.push_back(std::move(rec));
  }
  return ElectionDataset(std::move(election_id), std::move(roster), std::move(records),
                         leader);
}

std::string serialize_dataset(const ElectionDataset &dataset) {
  const bool any_tags = std::any_of(dataset.records().begin(), dataset.records().end(),
                                    [](const PrecinctRecord &r) { return !r.tags.empty(); });
  std::string out;
  for (std::size_t i = 0; i < kFixedColumns; ++i) {
    if (i) out += ',';
    out += kFixedHeader[i];
  }
  for (const auto &id : dataset.roster().ids()) {
    out += ",votes_";
    out += id;
  }
  if (any_tags) out += ",tags";
  out += '\n';
  for (const auto &r : dataset.records()) {
    out += csv::quote(r.precinct_id);
    out += ',';
    out += csv::quote(r.region);
    out += ',';
    out += csv::quote(r.territory);
    for (Count c : {r.registered, r.ballots_cast, r.invalid_ballots}) {
      out += ',';
      out += std::to_string(c);
    }
    out += r.machine_counted ? ",1" : ",0";
    for (Count v : r.votes) {
      out += ',';
      out += std::to_string(v);
    }
    if (any_tags) {
      std::string joined;
      for (std::size_t t = 0; t < r.tags.size(); ++t) {
        if (t) joined += ';';
        joined += r.tags[t];
      }
      out += ',';
      out += csv::quote(joined);
    }
    out += '\n';
  }
  return out;
}

std::pair<ElectionDataset, ElectionDataset> partition(const ElectionDataset &dataset,
                                                      const RecordPredicate &predicate) {
  std::vector<PrecinctRecord> matching, rest;
  for (const auto &r : dataset.records()) {
    (predicate(r) ? matching : rest).push_back(r);
  }
  return {ElectionDataset(dataset.election_id(), dataset.roster(), std::move(matching),
                          dataset.leader_id()),
          ElectionDataset(dataset.election_id(), dataset.roster(), std::move(rest),
                          dataset.leader_id())};
}

}  // namespace ef
