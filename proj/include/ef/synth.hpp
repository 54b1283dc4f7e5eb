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

#ifndef EF_SYNTH_HPP_
#define EF_SYNTH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ef/dataset.hpp"
#include "ef/dynamics.hpp"

namespace ef {

struct TurnoutComponent {
  double mean = 0.5;
  double sd = 0.1;
  double weight = 1.0;
};

struct PartyShare {
  std::string id;
  double share = 0.0;
};

struct RegisteredModel {
  double log_mean = 7.313220387090301;  // ln 1500
  double log_sd = 0.3;
  Count min = 50;
  Count max = 10000;
};

/// Honest electorate. Registered sizes are log-normal (rounded, clamped to
/// [min, max]); turnout is a Gaussian mixture truncated to [0, 1]; each
/// precinct jitters the baseline shares by `share_noise_sd`. Share mass left
/// over below 1 becomes invalid ballots.
struct HonestModel {
  std::string election_id = "synthetic";
  std::size_t precincts = 0;
  RegisteredModel registered;
  std::vector<TurnoutComponent> turnout;
  std::vector<PartyShare> parties;
  std::string leader;  // defaults to the first party
  double share_noise_sd = 0.0;
  std::size_t territories = 1;
  double machine_counted_fraction = 0.0;
};

/// Throws InvalidModel describing the first problem.
void validate(const HonestModel &model);

enum class TransferTargeting { kUniform, kTurnoutGraded };
enum class RoundingQuantity { kTurnout, kLeaderShare };
enum class FraudScope { kAll, kHandCounted };

std::string_view to_string(TransferTargeting targeting);
std::string_view to_string(RoundingQuantity quantity);
std::string_view to_string(FraudScope scope);

/// Stuffed ballots per affected precinct: round(intensity_i * registered),
/// with intensity_i = intensity * (1 - jitter * U[0,1)), capped at the unused
/// part of the register. All go to the leader.
struct StuffingSpec {
  double fraction = 0.0;
  double intensity = 0.0;
  double jitter = 0.0;
};

/// Moves round(share_i * votes) of every other party to the leader.
/// kUniform: random precincts, share_i = share.
/// kTurnoutGraded: the highest-turnout precincts, share_i rising linearly with
/// turnout rank up to `share` at the top.
struct TransferSpec {
  double fraction = 0.0;
  double share = 0.0;
  TransferTargeting targeting = TransferTargeting::kUniform;
};

/// Moves the chosen quantity into [t, t + 0.5) points of the nearest target
/// with the smallest count change. Turnout rises by stuffing for the leader
/// and falls by removing leader ballots; leader share rises by transfer from
/// the other parties and falls by the reverse. Changes larger than
/// `max_adjustment` (fraction of registered or of cast) are skipped.
struct RoundingSpec {
  double fraction = 0.0;
  std::vector<int> targets{70, 75, 80, 85};
  RoundingQuantity quantity = RoundingQuantity::kTurnout;
  double max_adjustment = 0.1;
};

/// Adds round(size * registered) leader ballots after the last intraday
/// report.
struct JumpSpec {
  double fraction = 0.0;
  double size = 0.0;
};

struct FraudScenario {
  StuffingSpec stuffing;
  TransferSpec transfer;
  RoundingSpec target_rounding;
  JumpSpec intraday_jump;
  FraudScope scope = FraudScope::kAll;
  std::optional<std::uint64_t> seed;  // overrides the seed given to apply_fraud
};

void validate(const FraudScenario &scenario);

/// Per-precinct record of what was injected.
struct PrecinctTruth {
  std::string precinct_id;
  Count stuffed = 0;
  Count transferred = 0;
  int rounded_to = 0;  // 0 when not rounded
  Count rounding_ballots = 0;   // signed change of ballots_cast
  Count rounding_transfer = 0;  // signed votes moved to the leader
  Count jump = 0;

  Count leader_gain() const {
    return stuffed + transferred + rounding_ballots + rounding_transfer + jump;
  }
  bool touched() const {
    return stuffed != 0 || transferred != 0 || rounded_to != 0 || jump != 0;
  }
  bool operator==(const PrecinctTruth &) const = default;
};

struct GroundTruth {
  std::vector<PrecinctTruth> precincts;  // dataset order
  std::vector<std::string> log;          // skipped or capped operations

  Count total_stuffed() const;
  Count total_transferred() const;
  Count total_jump() const;
  std::vector<std::string> jumped() const;   // sorted
  std::vector<std::string> rounded() const;  // sorted
};

struct SyntheticElection {
  ElectionDataset dataset;
  SeriesMap intraday;
  GroundTruth truth;
};

/// Precinct i draws from Rng(derive_seed(seed, kStreamHonest, i)); output is
/// identical for any thread count.
SyntheticElection generate_honest(const HonestModel &model, std::uint64_t seed);

/// Applies stuffing, transfer, rounding and jumps in that order. Precinct
/// selection and per-precinct draws come from kStreamFraud sub-seeds of
/// scenario.seed (or `seed`). The intraday map may be empty.
SyntheticElection apply_fraud(const SyntheticElection &election, const FraudScenario &scenario,
                              std::uint64_t seed);

/// Convenience overload for a bare dataset.
ElectionDataset apply_fraud(const ElectionDataset &dataset, const FraudScenario &scenario,
                            std::uint64_t seed, GroundTruth *truth = nullptr);

/// Logistic cumulative fraction of the day's voters present at `minutes`,
/// for polls open 08:00-20:00.
double accrual_fraction(double minutes, double midpoint_minutes, double scale_minutes);

inline const std::vector<int> &intraday_report_times() {
  static const std::vector<int> times{10 * 60, 12 * 60, 15 * 60, 18 * 60};
  return times;
}

HonestModel honest_model_from_json(const nlohmann::json &j);
nlohmann::json to_json(const HonestModel &model);
FraudScenario scenario_from_json(const nlohmann::json &j);
nlohmann::json to_json(const FraudScenario &scenario);

/// precinct_id,stuffed,transferred,rounded_to,rounding_ballots,rounding_transfer,jump
std::string serialize_ground_truth(const GroundTruth &truth);

}  // namespace ef

#endif  // EF_SYNTH_HPP_
