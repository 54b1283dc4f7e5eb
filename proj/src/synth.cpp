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

#include "ef/synth.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "ef/csv.hpp"
#include "ef/error.hpp"
#include "ef/histogram.hpp"
#include "ef/parallel.hpp"
#include "ef/rng.hpp"

namespace ef {

namespace {

constexpr double kOpen = 8 * 60;
constexpr double kClose = 20 * 60;
constexpr double kMidpointMean = 13 * 60;
constexpr double kMidpointSd = 30;
constexpr double kAccrualScale = 90;

enum Mechanism : std::uint64_t { kMechStuffing = 1, kMechTransfer, kMechRounding, kMechJump };

bool finite_fraction(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

[[noreturn]] void invalid(const std::string &message) { fail(ErrorCode::kInvalidModel, message); }

std::string precinct_name(std::size_t i, std::size_t count) {
  const int width = std::max<int>(5, static_cast<int>(std::to_string(count).size()));
  return fmt::format("P{:0{}}", i + 1, width);
}

double draw_turnout(Rng &rng, const std::vector<TurnoutComponent> &mixture) {
  double u = rng.uniform();
  std::size_t c = 0;
  for (; c + 1 < mixture.size(); ++c) {
    if (u < mixture[c].weight) break;
    u -= mixture[c].weight;
  }
  const auto &comp = mixture[c];
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double t = rng.normal(comp.mean, comp.sd);
    if (t >= 0.0 && t <= 1.0) return t;
  }
  return std::clamp(comp.mean, 0.0, 1.0);
}

// Exact selection of round(fraction * |eligible|) indices, returned sorted.
std::vector<std::size_t> select(std::vector<std::size_t> eligible, double fraction, Rng &rng) {
  const auto k = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(eligible.size())));
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + rng.below(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(k);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

// Splits `amount` across `weights` proportionally (largest remainder, ties to
// the lower index). Requires amount <= sum(weights) when used for removal.
std::vector<Count> apportion(Count amount, const std::vector<Count> &weights) {
  std::vector<Count> out(weights.size(), 0);
  const Count total = std::accumulate(weights.begin(), weights.end(), Count{0});
  if (amount == 0 || total == 0) return out;
  std::vector<std::pair<__int128, std::size_t>> remainders;
  Count assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const __int128 prod = static_cast<__int128>(amount) * weights[i];
    out[i] = static_cast<Count>(prod / total);
    assigned += out[i];
    remainders.emplace_back(prod % total, i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto &a, const auto &b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < amount; ++r, ++assigned) ++out[remainders[r].second];
  return out;
}

Count ceil_div(Count a, Count b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

// Count k closest to `current` with k / n in [t, t + 0.5) percent, falling back
// to the half-up bin of t when that window holds no integer.
std::optional<Count> landing_count(Count current, Count n, int t) {
  Count lo = ceil_div(static_cast<Count>(t) * n, 100);
  Count hi = ceil_div((2 * static_cast<Count>(t) + 1) * n, 200) - 1;
  if (lo > hi) lo = ceil_div((2 * static_cast<Count>(t) - 1) * n, 200);
  lo = std::max<Count>(lo, 0);
  hi = std::min(hi, n);
  if (lo > hi) return std::nullopt;
  return std::clamp(current, lo, hi);
}

int nearest_target(Count k, Count n, const std::vector<int> &targets) {
  int best = targets.front();
  __int128 best_gap = -1;
  for (int t : targets) {
    // |100k/n - t| scaled by n
    __int128 gap = static_cast<__int128>(100) * k - static_cast<__int128>(t) * n;
    if (gap < 0) gap = -gap;
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best = t;
    }
  }
  return best;
}

void rescale_series(IntradaySeries &series, Count old_cast, Count new_cast) {
  if (old_cast <= 0) return;
  for (auto &r : series.reports) {
    r.cumulative = static_cast<Count>(static_cast<__int128>(r.cumulative) * new_cast / old_cast);
  }
}

void clamp_series(IntradaySeries &series, Count cast) {
  for (auto &r : series.reports) r.cumulative = std::min(r.cumulative, cast);
}

template <typename Enum>
Enum parse_enum(const nlohmann::json &j, std::string_view key,
                std::initializer_list<std::pair<std::string_view, Enum>> options, Enum fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(std::string(key)).is_string()) invalid(fmt::format("'{}' must be a string", key));
  const auto text = j.at(std::string(key)).get<std::string>();
  for (const auto &[name, value] : options) {
    if (text == name) return value;
  }
  invalid(fmt::format("unknown value '{}' for '{}'", text, key));
}

void check_keys(const nlohmann::json &j, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) invalid(fmt::format("{} must be a JSON object", where));
  for (const auto &[key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid(fmt::format("{}: unknown field '{}'", where, key));
    }
  }
}

template <typename T>
T get_or(const nlohmann::json &j, std::string_view key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(std::string(key)).get<T>();
  } catch (const nlohmann::json::exception &) {
    invalid(fmt::format("field '{}' has the wrong type", key));
  }
}

}  // namespace

void validate(const HonestModel &model) {
  const auto &reg = model.registered;
  if (!std::isfinite(reg.log_mean) || !std::isfinite(reg.log_sd) || reg.log_sd < 0.0) {
    invalid("registered: log_mean must be finite and log_sd >= 0");
  }
  if (reg.min < 1 || reg.max < reg.min) invalid("registered: need 1 <= min <= max");
  if (model.turnout.empty()) invalid("turnout: at least one mixture component is required");
  double weight_sum = 0.0;
  for (const auto &c : model.turnout) {
    if (!std::isfinite(c.mean) || !std::isfinite(c.sd) || c.sd < 0.0 || !(c.weight >= 0.0)) {
      invalid("turnout: component needs finite mean, sd >= 0 and weight >= 0");
    }
    weight_sum += c.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    invalid(fmt::format("turnout: mixture weights sum to {}, expected 1", weight_sum));
  }
  if (model.parties.empty()) invalid("parties: at least one party is required");
  double share_sum = 0.0;
  std::set<std::string> ids;
  for (const auto &p : model.parties) {
    if (p.id.empty() || !ids.insert(p.id).second) invalid("parties: ids must be unique and non-empty");
    if (!finite_fraction(p.share)) invalid("parties: shares must lie in [0, 1]");
    share_sum += p.share;
  }
  if (share_sum > 1.0 + 1e-9) invalid(fmt::format("parties: shares sum to {}, above 1", share_sum));
  if (!model.leader.empty() && !ids.count(model.leader)) {
    invalid(fmt::format("leader '{}' is not a listed party", model.leader));
  }
  if (!std::isfinite(model.share_noise_sd) || model.share_noise_sd < 0.0) {
    invalid("share_noise_sd must be >= 0");
  }
  if (model.territories < 1) invalid("territories must be >= 1");
  if (!finite_fraction(model.machine_counted_fraction)) {
    invalid("machine_counted_fraction must lie in [0, 1]");
  }
}

void validate(const FraudScenario &s) {
  const auto check = [](double v, std::string_view name) {
    if (!finite_fraction(v)) invalid(fmt::format("{} must lie in [0, 1]", name));
  };
  check(s.stuffing.fraction, "stuffing.fraction");
  check(s.stuffing.intensity, "stuffing.intensity");
  check(s.stuffing.jitter, "stuffing.jitter");
  check(s.transfer.fraction, "transfer.fraction");
  check(s.transfer.share, "transfer.share");
  check(s.target_rounding.fraction, "target_rounding.fraction");
  check(s.target_rounding.max_adjustment, "target_rounding.max_adjustment");
  check(s.intraday_jump.fraction, "intraday_jump.fraction");
  check(s.intraday_jump.size, "intraday_jump.size");
  if (s.target_rounding.fraction > 0.0 && s.target_rounding.targets.empty()) {
    invalid("target_rounding.targets must not be empty");
  }
  for (int t : s.target_rounding.targets) {
    if (t < 0 || t > 100) invalid("target_rounding.targets must lie in [0, 100]");
  }
}

std::string_view to_string(TransferTargeting targeting) {
  return targeting == TransferTargeting::kUniform ? "uniform" : "turnout_graded";
}

std::string_view to_string(RoundingQuantity quantity) {
  return quantity == RoundingQuantity::kTurnout ? "turnout" : "leader_share";
}

std::string_view to_string(FraudScope scope) {
  return scope == FraudScope::kAll ? "all" : "hand_counted";
}

Count GroundTruth::total_stuffed() const {
  Count s = 0;
  for (const auto &p : precincts) s += p.stuffed;
  return s;
}

Count GroundTruth::total_transferred() const {
  Count s = 0;
  for (const auto &p : precincts) s += p.transferred;
  return s;
}

Count GroundTruth::total_jump() const {
  Count s = 0;
  for (const auto &p : precincts) s += p.jump;
  return s;
}

std::vector<std::string> GroundTruth::jumped() const {
  std::vector<std::string> out;
  for (const auto &p : precincts) {
    if (p.jump > 0) out.push_back(p.precinct_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> GroundTruth::rounded() const {
  std::vector<std::string> out;
  for (const auto &p : precincts) {
    if (p.rounded_to != 0) out.push_back(p.precinct_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double accrual_fraction(double minutes, double midpoint, double scale) {
  const auto logistic = [&](double t) { return 1.0 / (1.0 + std::exp(-(t - midpoint) / scale)); };
  const double lo = logistic(kOpen);
  const double hi = logistic(kClose);
  return std::clamp((logistic(minutes) - lo) / (hi - lo), 0.0, 1.0);
}

SyntheticElection generate_honest(const HonestModel &model, std::uint64_t seed) {
  validate(model);
  std::vector<std::string> ids;
  for (const auto &p : model.parties) ids.push_back(p.id);
  const PartyRoster roster(ids);
  const std::string leader = model.leader.empty() ? ids.front() : model.leader;

  std::vector<double> baseline;
  for (const auto &p : model.parties) baseline.push_back(p.share);
  const double baseline_total = std::accumulate(baseline.begin(), baseline.end(), 0.0);

  const std::size_t n = model.precincts;
  std::vector<PrecinctRecord> records(n);
  std::vector<IntradaySeries> series(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(derive_seed(seed, kStreamHonest, i));
    auto &r = records[i];
    r.precinct_id = precinct_name(i, n);
    r.region = "synthetic";
    r.territory = fmt::format("T{:02}", i % model.territories + 1);

    const double size = rng.lognormal(model.registered.log_mean, model.registered.log_sd);
    r.registered = std::clamp<Count>(static_cast<Count>(std::llround(std::min(size, 1e15))),
                                     model.registered.min, model.registered.max);
    const double turnout = draw_turnout(rng, model.turnout);
    r.ballots_cast = rng.binomial(r.registered, turnout);

    std::vector<double> shares = baseline;
    if (model.share_noise_sd > 0.0) {
      double sum = 0.0;
      for (auto &s : shares) {
        s = std::max(0.0, s + rng.normal(0.0, model.share_noise_sd));
        sum += s;
      }
      if (sum > 0.0) {
        for (auto &s : shares) s *= baseline_total / sum;
      }
    }
    r.votes = rng.multinomial(r.ballots_cast, shares);
    r.invalid_ballots =
        r.ballots_cast - std::accumulate(r.votes.begin(), r.votes.end(), Count{0});
    r.machine_counted = rng.uniform() < model.machine_counted_fraction;

    auto &s = series[i];
    s.precinct_id = r.precinct_id;
    const double midpoint = rng.normal(kMidpointMean, kMidpointSd);
    for (int t : intraday_report_times()) {
      const double f = accrual_fraction(t, midpoint, kAccrualScale);
      s.reports.push_back({ClockTime{t}, static_cast<Count>(std::floor(f * static_cast<double>(r.ballots_cast)))});
    }
  });

  SyntheticElection out;
  out.dataset = ElectionDataset(model.election_id, roster, std::move(records), leader);
  for (auto &s : series) {
    auto id = s.precinct_id;
    out.intraday.emplace(std::move(id), std::move(s));
  }
  for (const auto &r : out.dataset.records()) out.truth.precincts.push_back({r.precinct_id});
  return out;
}

SyntheticElection apply_fraud(const SyntheticElection &election, const FraudScenario &scenario,
                              std::uint64_t seed) {
  validate(scenario);
  const std::uint64_t base = scenario.seed.value_or(seed);
  const auto &dataset = election.dataset;
  const std::size_t leader = dataset.leader();
  std::vector<PrecinctRecord> records = dataset.records();
  SeriesMap intraday = election.intraday;
  GroundTruth truth;
  truth.precincts.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    truth.precincts[i].precinct_id = records[i].precinct_id;
  }
  auto &log = truth.log;
  const auto series_of = [&](std::size_t i) -> IntradaySeries * {
    const auto it = intraday.find(records[i].precinct_id);
    return it == intraday.end() ? nullptr : &it->second;
  };

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (scenario.scope == FraudScope::kAll || !records[i].machine_counted) eligible.push_back(i);
  }
  const auto mech_seed = [&](Mechanism m) { return derive_seed(base, kStreamFraud, m); };

  if (scenario.stuffing.fraction > 0.0 && scenario.stuffing.intensity > 0.0) {
    Rng pick(mech_seed(kMechStuffing));
    for (std::size_t i : select(eligible, scenario.stuffing.fraction, pick)) {
      Rng rng(derive_seed(mech_seed(kMechStuffing), kStreamFraud, i));
      auto &r = records[i];
      const double intensity =
          scenario.stuffing.intensity * (1.0 - scenario.stuffing.jitter * rng.uniform());
      Count add = std::llround(intensity * static_cast<double>(r.registered));
      const Count room = r.registered - r.ballots_cast;
      if (add > room) {
        log.push_back(fmt::format("{}: InfeasibleScenario: stuffing of {} capped at {}",
                                  r.precinct_id, add, room));
        add = room;
      }
      const Count old_cast = r.ballots_cast;
      r.ballots_cast += add;
      r.votes[leader] += add;
      truth.precincts[i].stuffed = add;
      if (auto *s = series_of(i)) rescale_series(*s, old_cast, r.ballots_cast);
    }
  }

  if (scenario.transfer.fraction > 0.0 && scenario.transfer.share > 0.0) {
    std::vector<std::pair<std::size_t, double>> chosen;  // (precinct, share moved)
    if (scenario.transfer.targeting == TransferTargeting::kUniform) {
      Rng pick(mech_seed(kMechTransfer));
      for (std::size_t i : select(eligible, scenario.transfer.fraction, pick)) {
        chosen.emplace_back(i, scenario.transfer.share);
      }
    } else {
      auto order = eligible;
      const auto turnout = [&](std::size_t i) {
        return static_cast<double>(records[i].ballots_cast) /
               static_cast<double>(records[i].registered);
      };
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return turnout(a) < turnout(b); });
      const auto k = static_cast<std::size_t>(
          std::llround(scenario.transfer.fraction * static_cast<double>(order.size())));
      for (std::size_t rank = 1; rank <= k; ++rank) {
        chosen.emplace_back(order[order.size() - k + rank - 1],
                            scenario.transfer.share * static_cast<double>(rank) /
                                static_cast<double>(k));
      }
    }
    for (const auto &[i, share] : chosen) {
      auto &r = records[i];
      Count moved = 0;
      for (std::size_t p = 0; p < r.votes.size(); ++p) {
        if (p == leader) continue;
        const Count m = std::llround(share * static_cast<double>(r.votes[p]));
        r.votes[p] -= m;
        moved += m;
      }
      r.votes[leader] += moved;
      truth.precincts[i].transferred = moved;
    }
  }

  const auto &rounding = scenario.target_rounding;
  if (rounding.fraction > 0.0) {
    Rng pick(mech_seed(kMechRounding));
    for (std::size_t i : select(eligible, rounding.fraction, pick)) {
      auto &r = records[i];
      auto &t = truth.precincts[i];
      if (rounding.quantity == RoundingQuantity::kTurnout) {
        const int target = nearest_target(r.ballots_cast, r.registered, rounding.targets);
        const auto k = landing_count(r.ballots_cast, r.registered, target);
        const Count delta = k ? *k - r.ballots_cast : 0;
        const bool too_far = std::abs(static_cast<double>(delta)) >
                             rounding.max_adjustment * static_cast<double>(r.registered);
        if (!k || too_far || r.votes[leader] + delta < 0) {
          log.push_back(fmt::format("{}: InfeasibleScenario: turnout cannot reach {}% within limits",
                                    r.precinct_id, target));
          continue;
        }
        r.ballots_cast += delta;
        r.votes[leader] += delta;
        t.rounded_to = target;
        t.rounding_ballots = delta;
        if (auto *s = series_of(i)) clamp_series(*s, r.ballots_cast);
      } else {
        if (r.ballots_cast == 0) {
          log.push_back(fmt::format("{}: InfeasibleScenario: nothing cast", r.precinct_id));
          continue;
        }
        const int target = nearest_target(r.votes[leader], r.ballots_cast, rounding.targets);
        const auto k = landing_count(r.votes[leader], r.ballots_cast, target);
        const Count delta = k ? *k - r.votes[leader] : 0;
        std::vector<Count> others = r.votes;
        others[leader] = 0;
        const Count others_total = std::accumulate(others.begin(), others.end(), Count{0});
        const bool too_far = std::abs(static_cast<double>(delta)) >
                             rounding.max_adjustment * static_cast<double>(r.ballots_cast);
        if (!k || too_far || delta > others_total || r.votes.size() < 2) {
          log.push_back(fmt::format(
              "{}: InfeasibleScenario: leader share cannot reach {}% within limits",
              r.precinct_id, target));
          continue;
        }
        if (delta > 0) {
          const auto take = apportion(delta, others);
          for (std::size_t p = 0; p < r.votes.size(); ++p) r.votes[p] -= take[p];
        } else if (delta < 0) {
          if (others_total == 0) others[leader == 0 ? 1 : 0] = 1;
          const auto give = apportion(-delta, others);
          for (std::size_t p = 0; p < r.votes.size(); ++p) r.votes[p] += give[p];
        }
        r.votes[leader] += delta;
        t.rounded_to = target;
        t.rounding_transfer = delta;
      }
    }
  }

  if (scenario.intraday_jump.fraction > 0.0 && scenario.intraday_jump.size > 0.0) {
    Rng pick(mech_seed(kMechJump));
    for (std::size_t i : select(eligible, scenario.intraday_jump.fraction, pick)) {
      auto &r = records[i];
      const Count add =
          std::llround(scenario.intraday_jump.size * static_cast<double>(r.registered));
      if (r.ballots_cast + add > r.registered) {
        log.push_back(fmt::format("{}: InfeasibleScenario: jump of {} exceeds the register",
                                  r.precinct_id, add));
        continue;
      }
      r.ballots_cast += add;
      r.votes[leader] += add;
      truth.precincts[i].jump = add;
    }
  }

  SyntheticElection out;
  out.dataset = ElectionDataset(dataset.election_id(), dataset.roster(), std::move(records),
                                dataset.leader_id());
  out.intraday = std::move(intraday);
  out.truth = std::move(truth);
  return out;
}

ElectionDataset apply_fraud(const ElectionDataset &dataset, const FraudScenario &scenario,
                            std::uint64_t seed, GroundTruth *truth) {
  SyntheticElection election{dataset, {}, {}};
  auto out = apply_fraud(election, scenario, seed);
  if (truth) *truth = std::move(out.truth);
  return std::move(out.dataset);
}

HonestModel honest_model_from_json(const nlohmann::json &j) {
  check_keys(j, "model",
             {"election_id", "precincts", "registered", "turnout", "parties", "leader",
              "share_noise_sd", "territories", "machine_counted_fraction"});
  HonestModel m;
  m.election_id = get_or<std::string>(j, "election_id", m.election_id);
  m.precincts = get_or<std::size_t>(j, "precincts", 0);
  if (j.contains("registered")) {
    const auto &r = j.at("registered");
    check_keys(r, "registered", {"log_mean", "log_sd", "min", "max"});
    m.registered.log_mean = get_or<double>(r, "log_mean", m.registered.log_mean);
    m.registered.log_sd = get_or<double>(r, "log_sd", m.registered.log_sd);
    m.registered.min = get_or<Count>(r, "min", m.registered.min);
    m.registered.max = get_or<Count>(r, "max", m.registered.max);
  }
  if (!j.contains("turnout") || !j.at("turnout").is_array()) {
    invalid("model: 'turnout' must be an array of components");
  }
  for (const auto &c : j.at("turnout")) {
    check_keys(c, "turnout component", {"mean", "sd", "weight"});
    m.turnout.push_back({get_or<double>(c, "mean", 0.5), get_or<double>(c, "sd", 0.1),
                         get_or<double>(c, "weight", 1.0)});
  }
  if (!j.contains("parties") || !j.at("parties").is_array()) {
    invalid("model: 'parties' must be an array");
  }
  for (const auto &p : j.at("parties")) {
    check_keys(p, "party", {"id", "share"});
    m.parties.push_back({get_or<std::string>(p, "id", ""), get_or<double>(p, "share", 0.0)});
  }
  m.leader = get_or<std::string>(j, "leader", "");
  m.share_noise_sd = get_or<double>(j, "share_noise_sd", 0.0);
  m.territories = get_or<std::size_t>(j, "territories", 1);
  m.machine_counted_fraction = get_or<double>(j, "machine_counted_fraction", 0.0);
  validate(m);
  return m;
}

nlohmann::json to_json(const HonestModel &m) {
  nlohmann::json j;
  j["election_id"] = m.election_id;
  j["precincts"] = m.precincts;
  j["registered"] = {{"log_mean", m.registered.log_mean},
                     {"log_sd", m.registered.log_sd},
                     {"min", m.registered.min},
                     {"max", m.registered.max}};
  j["turnout"] = nlohmann::json::array();
  for (const auto &c : m.turnout) {
    j["turnout"].push_back({{"mean", c.mean}, {"sd", c.sd}, {"weight", c.weight}});
  }
  j["parties"] = nlohmann::json::array();
  for (const auto &p : m.parties) j["parties"].push_back({{"id", p.id}, {"share", p.share}});
  j["leader"] = m.leader.empty() && !m.parties.empty() ? m.parties.front().id : m.leader;
  j["share_noise_sd"] = m.share_noise_sd;
  j["territories"] = m.territories;
  j["machine_counted_fraction"] = m.machine_counted_fraction;
  return j;
}

FraudScenario scenario_from_json(const nlohmann::json &j) {
  check_keys(j, "scenario",
             {"stuffing", "transfer", "target_rounding", "intraday_jump", "scope", "seed"});
  FraudScenario s;
  if (j.contains("stuffing")) {
    const auto &x = j.at("stuffing");
    check_keys(x, "stuffing", {"fraction", "intensity", "jitter"});
    s.stuffing = {get_or<double>(x, "fraction", 0.0), get_or<double>(x, "intensity", 0.0),
                  get_or<double>(x, "jitter", 0.0)};
  }
  if (j.contains("transfer")) {
    const auto &x = j.at("transfer");
    check_keys(x, "transfer", {"fraction", "share", "targeting"});
    s.transfer.fraction = get_or<double>(x, "fraction", 0.0);
    s.transfer.share = get_or<double>(x, "share", 0.0);
    s.transfer.targeting = parse_enum<TransferTargeting>(
        x, "targeting",
        {{"uniform", TransferTargeting::kUniform},
         {"turnout_graded", TransferTargeting::kTurnoutGraded}},
        TransferTargeting::kUniform);
  }
  if (j.contains("target_rounding")) {
    const auto &x = j.at("target_rounding");
    check_keys(x, "target_rounding", {"fraction", "targets", "quantity", "max_adjustment"});
    s.target_rounding.fraction = get_or<double>(x, "fraction", 0.0);
    s.target_rounding.targets = get_or<std::vector<int>>(x, "targets", s.target_rounding.targets);
    s.target_rounding.quantity = parse_enum<RoundingQuantity>(
        x, "quantity",
        {{"turnout", RoundingQuantity::kTurnout},
         {"leader_share", RoundingQuantity::kLeaderShare}},
        RoundingQuantity::kTurnout);
    s.target_rounding.max_adjustment =
        get_or<double>(x, "max_adjustment", s.target_rounding.max_adjustment);
  }
  if (j.contains("intraday_jump")) {
    const auto &x = j.at("intraday_jump");
    check_keys(x, "intraday_jump", {"fraction", "size"});
    s.intraday_jump = {get_or<double>(x, "fraction", 0.0), get_or<double>(x, "size", 0.0)};
  }
  s.scope = parse_enum<FraudScope>(
      j, "scope", {{"all", FraudScope::kAll}, {"hand_counted", FraudScope::kHandCounted}},
      FraudScope::kAll);
  if (j.contains("seed")) s.seed = get_or<std::uint64_t>(j, "seed", 0);
  validate(s);
  return s;
}

nlohmann::json to_json(const FraudScenario &s) {
  nlohmann::json j;
  j["stuffing"] = {{"fraction", s.stuffing.fraction},
                   {"intensity", s.stuffing.intensity},
                   {"jitter", s.stuffing.jitter}};
  j["transfer"] = {{"fraction", s.transfer.fraction},
                   {"share", s.transfer.share},
                   {"targeting", to_string(s.transfer.targeting)}};
  j["target_rounding"] = {{"fraction", s.target_rounding.fraction},
                          {"targets", s.target_rounding.targets},
                          {"quantity", to_string(s.target_rounding.quantity)},
                          {"max_adjustment", s.target_rounding.max_adjustment}};
  j["intraday_jump"] = {{"fraction", s.intraday_jump.fraction},
                        {"size", s.intraday_jump.size}};
  j["scope"] = to_string(s.scope);
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

std::string serialize_ground_truth(const GroundTruth &truth) {
  std::string out =
      "precinct_id,stuffed,transferred,rounded_to,rounding_ballots,rounding_transfer,jump\n";
  for (const auto &p : truth.precincts) {
    out += fmt::format("{},{},{},{},{},{},{}\n", csv::quote(p.precinct_id), p.stuffed,
                       p.transferred, p.rounded_to, p.rounding_ballots, p.rounding_transfer,
                       p.jump);
  }
  return out;
}

}  // namespace ef
