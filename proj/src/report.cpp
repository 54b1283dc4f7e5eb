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

#include "ef/report.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <unistd.h>

#include "ef/error.hpp"

namespace ef {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::kIo, "SHA-256 computation failed");
  }
  std::string out;
  for (unsigned int i = 0; i < length; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIo, fmt::format("read error on '{}'", path.string()));
  return content;
}

void write_atomic(const std::filesystem::path &path, std::string_view content) {
  auto tmp = path;
  tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      fail(ErrorCode::kIo, fmt::format("write error on '{}'", tmp.string()));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    fail(ErrorCode::kIo, fmt::format("cannot move output into '{}': {}", path.string(), ec.message()));
  }
}

InputDigest digest_input(std::string role, const std::string &path, std::string_view content) {
  return {std::move(role), path, sha256_hex(content), content.size()};
}

json make_report(std::string_view command, const json &config,
                 const std::vector<InputDigest> &inputs, json results,
                 const std::vector<std::string> &warnings,
                 const std::vector<std::string> &assumptions) {
  json r;
  r["schema_version"] = kReportSchemaVersion;
  r["tool"] = {{"name", "ef"}, {"version", std::string(kVersion)}};
  r["command"] = std::string(command);
  r["config"] = config;
  r["inputs"] = json::array();
  for (const auto &in : inputs) {
    r["inputs"].push_back(
        {{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}, {"bytes", in.bytes}});
  }
  r["results"] = std::move(results);
  r["warnings"] = warnings;
  r["assumptions"] = assumptions;
  r["caveat"] = std::string(kCaveat);
  return r;
}

std::string dump_report(const json &report) { return report.dump(2) + "\n"; }

json to_json(const TrendFit &fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"residual_rms", fit.residual_rms},
          {"slope_stderr", fit.slope_stderr},
          {"points", fit.point_count}};
}

json to_json(const IntegerPercentHistogram &h) {
  return {{"quantity", h.label},
          {"weight_mode", std::string(to_string(h.weight_mode))},
          {"binning", std::string(to_string(h.binning))},
          {"included_precincts", h.included_precincts},
          {"included_weight", h.included_weight},
          {"bins", h.bins}};
}

json to_json(const TurnoutBinTable &t) {
  json bins = json::array();
  for (std::size_t b = 0; b < t.bin_count; ++b) {
    json votes = json::object();
    for (std::size_t p = 0; p < t.roster.size(); ++p) votes[t.roster.id(p)] = t.votes[b][p];
    bins.push_back({{"lo", t.bin_lo(b)},
                    {"hi", t.bin_hi(b)},
                    {"precincts", t.precincts[b]},
                    {"registered", t.registered[b]},
                    {"ballots", t.ballots[b]},
                    {"votes", votes}});
  }
  json totals = json::object();
  const auto party_totals = t.party_totals();
  for (std::size_t p = 0; p < t.roster.size(); ++p) totals[t.roster.id(p)] = party_totals[p];
  return {{"bin_width", t.bin_width},
          {"bin_count", t.bin_count},
          {"leader", t.roster.id(t.leader)},
          {"total_ballots", t.total_ballots()},
          {"party_totals", totals},
          {"bins", bins}};
}

json to_json(const PeakReport &r) {
  json targets = json::array();
  for (const auto &t : r.targets) {
    targets.push_back({{"target", t.target},
                       {"observed", t.observed},
                       {"null_mean", t.null_mean},
                       {"null_sd", t.null_sd},
                       {"z", t.z ? json(*t.z) : json(nullptr)},
                       {"p_value", t.p_value},
                       {"flagged", t.flagged}});
  }
  return {{"quantity", r.quantity},
          {"replicates", r.options.replicates},
          {"alpha", r.options.alpha},
          {"seed", r.options.seed},
          {"null_model", std::string(to_string(r.options.null_model))},
          {"weight_mode", std::string(to_string(r.options.weight_mode))},
          {"binning", std::string(to_string(r.options.binning))},
          {"prior",
           {{"alpha", r.prior.alpha},
            {"beta", r.prior.beta},
            {"mean", r.prior.mean},
            {"between_variance", r.prior.between_variance}}},
          {"histogram", to_json(r.observed)},
          {"targets", targets},
          {"flagged_targets", r.flagged_targets()},
          {"null_envelope", {{"mean", r.null_mean}, {"lo", r.null_lo}, {"hi", r.null_hi}}}};
}

json to_json(const StuffingEstimate &e) {
  return {{"window", {{"lo", e.window.lo}, {"hi", e.window.hi}}},
          {"reference_ratio", e.reference_ratio},
          {"anomalous_votes", e.total_anomalous},
          {"anomalous_by_bin", e.anomalous_by_bin},
          {"leader_total", e.leader_total},
          {"ballots_total", e.ballots_total},
          {"anomalous_share_of_leader",
           e.leader_total > 0 ? e.total_anomalous / static_cast<double>(e.leader_total) : 0.0},
          {"observed_share", e.observed_share},
          {"adjusted_share", e.adjusted_share}};
}

json to_json(const LinearityCheck &c) {
  return {{"verdict", std::string(to_string(c.verdict))},
          {"split_x", c.split_x},
          {"lower", to_json(c.lower)},
          {"upper", to_json(c.upper)},
          {"slope_gap", c.slope_gap},
          {"combined_stderr", c.combined_stderr}};
}

json to_json(const ClusterSplit &s, bool include_assignment) {
  json j = {{"decision", s.two_clusters ? "two" : "one"},
            {"bic_one", s.bic_one},
            {"bic_two", s.bic_two},
            {"separation", s.separation},
            {"centroids", s.centroids},
            {"sd", s.sd},
            {"weights", s.weights},
            {"winning_restart", s.winning_restart}};
  if (include_assignment) j["assignment"] = s.assignment;
  return j;
}

json to_json(const SubsetContrast &c, const PartyRoster &roster) {
  json parties = json::array();
  for (std::size_t p = 0; p < roster.size(); ++p) {
    parties.push_back({{"party", roster.id(p)},
                       {"share_a", c.share_a[p]},
                       {"share_b", c.share_b[p]},
                       {"difference_points", c.share_difference_points[p]}});
  }
  return {{"label_a", c.label_a},
          {"label_b", c.label_b},
          {"precincts_a", c.precincts_a},
          {"precincts_b", c.precincts_b},
          {"turnout_a", c.turnout_a},
          {"turnout_b", c.turnout_b},
          {"turnout_difference_points", c.turnout_difference_points},
          {"ks_turnout", c.ks_turnout},
          {"parties", parties}};
}

json to_json(const std::vector<DeltaRow> &rows) {
  json out = json::array();
  for (const auto &r : rows) {
    out.push_back({{"unit", r.unit},
                   {"share_a", format_centipoints(r.share_a)},
                   {"share_b", format_centipoints(r.share_b)},
                   {"turnout_a", format_centipoints(r.turnout_a)},
                   {"turnout_b", format_centipoints(r.turnout_b)},
                   {"share_delta", format_centipoints(r.share_delta, true)},
                   {"turnout_delta", format_centipoints(r.turnout_delta, true)}});
  }
  return out;
}

json to_json(const DisplacementSummary &s) {
  json rows = json::array();
  for (const auto &r : s.rows) {
    rows.push_back({{"precinct_id", r.precinct_id},
                    {"from", {{"turnout", r.from_turnout}, {"leader_share", r.from_share}}},
                    {"to", {{"turnout", r.to_turnout}, {"leader_share", r.to_share}}},
                    {"delta_turnout", r.delta_turnout},
                    {"delta_share", r.delta_share}});
  }
  return {{"rows", rows},
          {"mean_delta_turnout", s.mean_delta_turnout},
          {"mean_delta_share", s.mean_delta_share}};
}

json to_json(const PairedScan &s) {
  const auto gaps = [](const std::vector<ContestGap> &v) {
    json out = json::array();
    for (const auto &g : v) {
      out.push_back({{"precinct_id", g.precinct_id},
                     {"votes_a", g.votes_a},
                     {"votes_b", g.votes_b},
                     {"gap", g.gap}});
    }
    return out;
  };
  return {{"party", s.party},
          {"threshold", s.threshold},
          {"shared_precincts", s.shared_precincts},
          {"a_over_b", gaps(s.a_over_b)},
          {"b_over_a", gaps(s.b_over_a)}};
}

json to_json(const HyperactiveReport &r) {
  json points = json::array();
  for (const auto &p : r.points) {
    points.push_back({{"precinct_id", p.precinct_id},
                      {"turnout", p.turnout},
                      {"leader_share", p.leader_share},
                      {"final_increment", p.increment},
                      {"flagged", p.flagged}});
  }
  return {{"threshold", r.threshold},
          {"flagged", r.flagged},
          {"flagged_count", r.flagged.size()},
          {"missing_series", r.missing_series},
          {"missing_count", r.missing_series.size()},
          {"points", points}};
}

json to_json(const OddsResult &o) {
  return {{"ratio", format_fraction(o.ratio)},
          {"mixed", format_mixed(o.ratio)},
          {"decimal", format_significant(o.ratio, 15)},
          {"favored", o.favored}};
}

json to_json(const Coincidence &c) {
  json j = {{"total", c.total},
            {"marked", c.marked},
            {"exact", c.exact},
            {"probability", c.probability},
            {"log10_probability", c.log10_probability}};
  if (c.subsets) {
    j["subsets"] = c.subsets->str();
    j["fraction"] = format_fraction(*c.fraction());
  }
  return j;
}

json to_json(const GroundTruth &t) {
  return {{"stuffed", t.total_stuffed()},
          {"transferred", t.total_transferred()},
          {"jump", t.total_jump()},
          {"rounded_precincts", t.rounded().size()},
          {"jumped_precincts", t.jumped().size()},
          {"log", t.log}};
}

}  // namespace ef
