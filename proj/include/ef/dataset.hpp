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

#ifndef EF_DATASET_HPP_
#define EF_DATASET_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ef {

using Count = std::int64_t;

/// Ordered party identifiers. Order is fixed for the lifetime of a dataset and
/// every vote vector is aligned to it.
class PartyRoster {
 public:
  PartyRoster() = default;
  explicit PartyRoster(std::vector<std::string> ids,
                       std::vector<std::string> display_names = {});

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string> &ids() const noexcept { return ids_; }
  const std::string &id(std::size_t i) const { return ids_.at(i); }
  const std::string &display_name(std::size_t i) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

  bool operator==(const PartyRoster &) const = default;

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> display_names_;
};

struct PrecinctRecord {
  std::string precinct_id;
  std::string region;
  std::string territory;
  Count registered = 0;
  Count ballots_cast = 0;
  Count invalid_ballots = 0;
  std::vector<Count> votes;
  bool machine_counted = false;
  std::vector<std::string> tags;

  Count valid_votes() const;

  bool operator==(const PrecinctRecord &) const = default;
};

/// Returns the first violated record rule, or nullopt when the record is
/// consistent: non-negative counts, registered > 0,
/// sum(votes) + invalid <= ballots_cast <= registered.
std::optional<std::string> check_record(const PrecinctRecord &record);

class ElectionDataset {
 public:
  ElectionDataset() = default;
  /// Validates uniqueness of precinct ids, vote-vector lengths, every record
  /// invariant and the leader id; throws Error on the first violation.
  ElectionDataset(std::string election_id, PartyRoster roster,
                  std::vector<PrecinctRecord> records,
                  std::string_view leader);

  const std::string &election_id() const noexcept { return election_id_; }
  const PartyRoster &roster() const noexcept { return roster_; }
  const std::vector<PrecinctRecord> &records() const noexcept {
    return records_;
  }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::size_t leader() const noexcept { return leader_; }
  const std::string &leader_id() const { return roster_.id(leader_); }

  /// Per-party vote totals aligned to the roster.
  std::vector<Count> party_totals() const;
  Count total_cast() const;
  Count total_registered() const;

  const PrecinctRecord *find(std::string_view precinct_id) const;

  bool operator==(const ElectionDataset &) const = default;

 private:
  std::string election_id_;
  PartyRoster roster_;
  std::vector<PrecinctRecord> records_;
  std::size_t leader_ = 0;
};

/// Per-precinct fractions. share_of_cast is 0 when nothing was cast.
struct ShareView {
  std::string precinct_id;
  double turnout = 0.0;
  std::vector<double> share_of_registered;
  std::vector<double> share_of_cast;
};

ShareView derive_shares(const PrecinctRecord &record);

/// Parses the precinct CSV. Columns:
/// precinct_id,region,territory,registered,ballots_cast,invalid,
/// machine_counted,votes_<party>...[,tags]
ElectionDataset parse_dataset(std::string_view csv_text,
                              std::string_view leader,
                              std::string election_id = {});

/// Inverse of parse_dataset. A `tags` column is written only when some record
/// carries tags (joined with ';').
std::string serialize_dataset(const ElectionDataset &dataset);

using RecordPredicate = std::function<bool(const PrecinctRecord &)>;

/// Splits into (matching, non-matching); both keep roster, leader and the
/// original record order.
std::pair<ElectionDataset, ElectionDataset> partition(
    const ElectionDataset &dataset, const RecordPredicate &predicate);

}  // namespace ef

#endif  // EF_DATASET_HPP_
