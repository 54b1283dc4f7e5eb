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

#ifndef EF_REPORT_HPP_
#define EF_REPORT_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ef/anomaly.hpp"
#include "ef/compare.hpp"
#include "ef/dynamics.hpp"
#include "ef/histogram.hpp"
#include "ef/peaks.hpp"
#include "ef/probkit.hpp"
#include "ef/scatter.hpp"
#include "ef/synth.hpp"

namespace ef {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Footer carried by every report.
inline constexpr std::string_view kCaveat =
    "Diagnostic output only. Statistical anomalies in published precinct data are not proof "
    "of fraud, and their absence is not proof of a clean count; findings need corroboration "
    "from observers, protocols and other independent evidence.";

std::string sha256_hex(std::string_view bytes);

/// Reads a whole file; throws Io.
std::string read_file(const std::filesystem::path &path);

/// Writes to a temporary sibling and renames it over `path`; throws Io.
void write_atomic(const std::filesystem::path &path, std::string_view content);

struct InputDigest {
  std::string role;  // e.g. "precincts", "intraday"
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

InputDigest digest_input(std::string role, const std::string &path, std::string_view content);

/// Assembles the common envelope: tool, version, command, config, inputs,
/// results, warnings, assumptions and the caveat.
nlohmann::json make_report(std::string_view command, const nlohmann::json &config,
                           const std::vector<InputDigest> &inputs, nlohmann::json results,
                           const std::vector<std::string> &warnings = {},
                           const std::vector<std::string> &assumptions = {});

/// Stable text form: two-space indent, trailing newline.
std::string dump_report(const nlohmann::json &report);

nlohmann::json to_json(const TrendFit &fit);
nlohmann::json to_json(const IntegerPercentHistogram &histogram);
nlohmann::json to_json(const TurnoutBinTable &table);
nlohmann::json to_json(const PeakReport &report);
nlohmann::json to_json(const StuffingEstimate &estimate);
nlohmann::json to_json(const LinearityCheck &check);
nlohmann::json to_json(const ClusterSplit &split, bool include_assignment = false);
nlohmann::json to_json(const SubsetContrast &contrast, const PartyRoster &roster);
nlohmann::json to_json(const std::vector<DeltaRow> &rows);
nlohmann::json to_json(const DisplacementSummary &summary);
nlohmann::json to_json(const PairedScan &scan);
nlohmann::json to_json(const HyperactiveReport &report);
nlohmann::json to_json(const OddsResult &odds);
nlohmann::json to_json(const Coincidence &coincidence);
nlohmann::json to_json(const GroundTruth &truth);

}  // namespace ef

#endif  // EF_REPORT_HPP_
