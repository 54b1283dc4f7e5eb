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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ef/anomaly.hpp"
#include "ef/cli.hpp"
#include "ef/compare.hpp"
#include "ef/dynamics.hpp"
#include "ef/peaks.hpp"
#include "ef/probkit.hpp"
#include "ef/report.hpp"
#include "ef/rng.hpp"
#include "ef/scatter.hpp"
#include "ef/synth.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

namespace {

using namespace ef;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr double kAc1MaxMillis = 1.0;
constexpr double kAc3RelTol = 0.05;
constexpr double kAc4Tol = 0.01;
constexpr int kAc5Datasets = 200;
constexpr double kAc5MaxFamilyRate = 0.04;
constexpr double kAc5MaxSeconds = 600.0;
constexpr int kAc6Seeds = 100;
constexpr double kAc6MinBump = 1.20;
constexpr double kAc6MinQuiet = 0.95;
constexpr double kAc6MinNaive = 0.50;
constexpr int kAc7Seeds = 100;
constexpr double kAc7MinPower = 0.90;
constexpr int kAc8Seeds = 100;
constexpr double kAc8RelTol = 0.20;
constexpr double kAc8MinRecovered = 0.90;
constexpr double kAc8HonestCap = 0.02;
constexpr double kAc8MinHonest = 0.95;
constexpr int kAc9Seeds = 100;
constexpr double kAc9MinVerdict = 0.90;
constexpr int kAc10Seeds = 100;
constexpr double kAc10MinAccuracy = 0.95;
constexpr double kAc10MinRate = 0.95;
constexpr int kAc11Seeds = 100;
constexpr int kAc12Instances = 50;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rate(int hits, int total) { return static_cast<double>(hits) / static_cast<double>(total); }

std::uint64_t seed_for(int criterion, int i) {
  return derive_seed(20260000 + static_cast<std::uint64_t>(criterion), 0, static_cast<std::uint64_t>(i));
}

Outcome ac1() {
  const auto la = parse_decimal("0.9"), pa = parse_decimal("1e-6");
  const auto lb = parse_decimal("0.1"), pb = parse_decimal("1e-3");
  const int calls = 1000;
  const auto start = Clock::now();
  OddsResult r;
  for (int i = 0; i < calls; ++i) r = posterior_odds(la, pa, lb, pb);
  const double ms = seconds_since(start) * 1000.0 / calls;
  const auto decimal = format_significant(r.ratio, 12);
  const bool ok = r.ratio == Rational(1000, 9) && format_mixed(r.ratio) == "111 1/9" &&
                  decimal == "111.111111111" && r.favored == "B" && ms < kAc1MaxMillis;
  return {ok, fmt::format("ratio {} = {} ~ {}, {:.4f} ms per call", format_fraction(r.ratio),
                          format_mixed(r.ratio), decimal, ms)};
}

Outcome ac2() {
  const double p = run_probability(0.5, 20);
  const bool ok = p == 9.5367431640625e-7 && p < 1e-6 &&
                  run_probability_exact(Rational(1, 2), 20) == Rational(1, 1048576);
  return {ok, fmt::format("{:.13e}", p)};
}

Outcome ac3() {
  const auto c = subset_coincidence(42, 6, 6);
  const bool exact = c.fraction() && *c.fraction() == Rational(1, 5245786);
  const double rel = std::abs(c.probability / 2e-7 - 1.0);
  return {exact && rel <= kAc3RelTol,
          fmt::format("1/{} = {:.4e}, {:.2f}% from 2e-7", c.subsets ? c.subsets->str() : "?",
                      c.probability, 100 * rel)};
}

Outcome ac4() {
  struct Row {
    const char *unit;
    double share, turnout;
  };
  const Row expected[] = {{"Kanavinsky", -3.68, 19.82},         {"Moskovsky", -14.30, 14.96},
                          {"Sormovsky", -26.44, -5.84},         {"Avtozavodsky North", -25.74, -5.56},
                          {"Avtozavodsky South", -24.33, -5.61}, {"Leninsky", -24.82, -6.07},
                          {"Nizhegorodsky", -22.22, -1.48},     {"Prioksky", -6.63, 10.60},
                          {"Sovetsky", -11.55, 4.08}};
  const auto [a, b] =
      parse_paired_unit_table(read_file(ef::testing::source_path("data/table1.csv")));
  const auto rows = cross_election_delta(a, b);
  int matched = 0;
  double worst = 0;
  for (const auto &e : expected) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const DeltaRow &r) { return r.unit == e.unit; });
    if (it == rows.end()) continue;
    const double ds = std::abs(DeltaRow::points(it->share_delta) - e.share);
    const double dt = std::abs(DeltaRow::points(it->turnout_delta) - e.turnout);
    worst = std::max({worst, ds, dt});
    if (ds <= kAc4Tol && dt <= kAc4Tol) ++matched;
  }
  const auto &k = rows.front();
  return {matched == 9 && rows.size() == 9,
          fmt::format("{}/9 rows within {:.2f}; {} {} / {}", matched, kAc4Tol, k.unit,
                      format_centipoints(k.share_delta, true), format_centipoints(k.turnout_delta, true))};
}

Outcome ac5() {
  const auto model = ef::testing::calibration_model();
  const auto start = Clock::now();
  int any = 0;
  std::vector<int> per_target(default_peak_targets().size(), 0);
  for (int i = 0; i < kAc5Datasets; ++i) {
    const auto e = generate_honest(model, seed_for(5, i));
    PeakOptions o;
    o.seed = seed_for(50, i);
    o.replicates = 1000;
    o.alpha = 0.01;
    const auto r = detect_round_peaks(e.dataset, Quantity::turnout(), o);
    for (std::size_t t = 0; t < r.targets.size(); ++t) per_target[t] += r.targets[t].flagged;
    if (!r.flagged_targets().empty()) ++any;
  }
  const double secs = seconds_since(start);
  const double family = rate(any, kAc5Datasets);
  std::string counts;
  for (std::size_t t = 0; t < per_target.size(); ++t) {
    counts += fmt::format("{}{}:{}", t ? " " : "", default_peak_targets()[t], per_target[t]);
  }
  return {family <= kAc5MaxFamilyRate && secs < kAc5MaxSeconds,
          fmt::format("{}/{} datasets with a flag ({:.3f}); per target [{}]; {:.0f} s", any,
                      kAc5Datasets, family, counts, secs)};
}

Outcome ac6() {
  const auto model = ef::testing::small_precinct_model();
  int bumped = 0, quiet = 0, naive = 0;
  for (int i = 0; i < kAc6Seeds; ++i) {
    const auto e = generate_honest(model, seed_for(6, i));
    PeakOptions o;
    o.seed = seed_for(60, i);
    o.binning = Binning::kTruncate;
    const auto r = detect_round_peaks(e.dataset, Quantity::leader_share(), o);
    const auto &h = r.observed;
    const double neighbours = (static_cast<double>(h.bins[49]) + static_cast<double>(h.bins[51])) / 2.0;
    if (static_cast<double>(h.bins[50]) >= kAc6MinBump * neighbours) ++bumped;
    const auto it = std::find_if(r.targets.begin(), r.targets.end(), [](const TargetResult &t) { return t.target == 50; });
    if (it != r.targets.end() && !it->flagged) ++quiet;
    if (ef::testing::neighbour_flags(h, 50)) ++naive;
  }
  const bool ok = bumped == kAc6Seeds && rate(quiet, kAc6Seeds) >= kAc6MinQuiet &&
                  rate(naive, kAc6Seeds) >= kAc6MinNaive;
  return {ok, fmt::format("bin 50 >= 1.2x neighbours in {}/{}; detector quiet at 50 in {}/{}; "
                          "neighbour z-test flags 50 in {}/{}",
                          bumped, kAc6Seeds, quiet, kAc6Seeds, naive, kAc6Seeds)};
}

Outcome ac7() {
  const auto model = ef::testing::rounding_model();
  const auto scenario = ef::testing::rounding_scenario();
  int detected = 0;
  for (int i = 0; i < kAc7Seeds; ++i) {
    const auto e = apply_fraud(generate_honest(model, seed_for(7, i)), scenario, seed_for(7, i));
    PeakOptions o;
    o.seed = seed_for(70, i);
    const auto r = detect_round_peaks(e.dataset, Quantity::turnout(), o);
    int hits = 0;
    for (const auto &t : r.targets) {
      if ((t.target == 70 || t.target == 75 || t.target == 80 || t.target == 85) && t.p_value < 0.01) ++hits;
    }
    if (hits == 4) ++detected;
  }
  return {rate(detected, kAc7Seeds) >= kAc7MinPower,
          fmt::format("all four targets at p < 0.01 in {}/{}", detected, kAc7Seeds)};
}

Outcome ac8() {
  const auto model = ef::testing::stuffing_estimate_model();
  int recovered = 0, in_range = 0, honest_ok = 0;
  double worst = 0, lo_share = 1, hi_share = 0;
  for (int i = 0; i < kAc8Seeds; ++i) {
    const auto honest = generate_honest(model, seed_for(8, i));
    const double fraction = 0.02 + 0.18 * static_cast<double>(i) / (kAc8Seeds - 1);
    const auto e = apply_fraud(honest, ef::testing::stuffing_fraction(fraction), seed_for(8, i));
    const double injected = static_cast<double>(e.truth.total_stuffed());
    const double share = injected / static_cast<double>(e.dataset.total_cast());
    lo_share = std::min(lo_share, share);
    hi_share = std::max(hi_share, share);
    if (share >= 0.02 && share <= 0.20) ++in_range;
    const auto est = estimate_stuffing(turnout_bin_table(e.dataset, 0.01));
    const double rel = std::abs(est.total_anomalous - injected) / injected;
    worst = std::max(worst, rel);
    if (rel <= kAc8RelTol) ++recovered;
    const auto h = estimate_stuffing(turnout_bin_table(honest.dataset, 0.01));
    if (h.total_anomalous <= kAc8HonestCap * static_cast<double>(h.leader_total)) ++honest_ok;
  }
  const bool ok = in_range == kAc8Seeds && rate(recovered, kAc8Seeds) >= kAc8MinRecovered &&
                  rate(honest_ok, kAc8Seeds) >= kAc8MinHonest;
  return {ok, fmt::format("injected {:.1f}%..{:.1f}% of ballots; within 20% in {}/{} (worst {:.1f}%); "
                          "honest <= 2% of leader in {}/{}",
                          100 * lo_share, 100 * hi_share, recovered, kAc8Seeds, 100 * worst,
                          honest_ok, kAc8Seeds)};
}

Outcome ac9() {
  const auto model = ef::testing::geometry_model();
  int slopes_ok = 0, linear = 0, superlinear = 0;
  double leader_lo = 9, leader_hi = -9, others_abs = 0;
  for (int i = 0; i < kAc9Seeds; ++i) {
    const auto honest = generate_honest(model, seed_for(9, i));
    const auto s = apply_fraud(honest, ef::testing::stuffing_only(), seed_for(9, i));
    const auto st = apply_fraud(honest, ef::testing::stuffing_and_transfer(), seed_for(9, i));
    const double leader = fit_trend(build_points(s.dataset, "L", YMode::kShareOfRegistered)).slope;
    leader_lo = std::min(leader_lo, leader);
    leader_hi = std::max(leader_hi, leader);
    bool ok = leader >= 0.7 && leader <= 1.0;
    for (const char *p : {"B", "C", "D", "E"}) {
      const double slope = fit_trend(build_points(s.dataset, p, YMode::kShareOfRegistered)).slope;
      others_abs = std::max(others_abs, std::abs(slope));
      ok = ok && std::abs(slope) <= 0.1;
    }
    if (ok) ++slopes_ok;
    if (superlinearity_check(build_points(s.dataset, "L", YMode::kShareOfCast)).verdict == Linearity::kLinear) ++linear;
    if (superlinearity_check(build_points(st.dataset, "L", YMode::kShareOfCast)).verdict == Linearity::kSuperlinear) ++superlinear;
  }
  const bool ok = slopes_ok == kAc9Seeds && rate(linear, kAc9Seeds) >= kAc9MinVerdict &&
                  rate(superlinear, kAc9Seeds) >= kAc9MinVerdict;
  return {ok, fmt::format("slopes in range {}/{} (leader {:.3f}..{:.3f}, max |other| {:.3f}); "
                          "stuffing-only linear {}/{}; stuffing+transfer superlinear {}/{}",
                          slopes_ok, kAc9Seeds, leader_lo, leader_hi, others_abs, linear, kAc9Seeds,
                          superlinear, kAc9Seeds)};
}

Outcome ac10() {
  int two = 0, one = 0;
  double worst_accuracy = 1.0;
  for (int i = 0; i < kAc10Seeds; ++i) {
    const auto pts = ef::testing::gaussian_cloud({{0.45, 0.30}, {0.75, 0.65}}, 500, 0.03, seed_for(10, i));
    const auto s = split_two_clusters(pts, {.seed = seed_for(100, i)});
    std::size_t correct = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) correct += s.assignment[k] == (k < 500 ? 0 : 1);
    const double accuracy = static_cast<double>(correct) / static_cast<double>(pts.size());
    worst_accuracy = std::min(worst_accuracy, accuracy);
    if (s.two_clusters && accuracy >= kAc10MinAccuracy) ++two;
    const auto single = ef::testing::gaussian_cloud({{0.6, 0.5}}, 1000, 0.03, seed_for(101, i));
    if (!split_two_clusters(single, {.seed = seed_for(102, i)}).two_clusters) ++one;
  }
  return {rate(two, kAc10Seeds) >= kAc10MinRate && rate(one, kAc10Seeds) >= kAc10MinRate,
          fmt::format("two with >= 95% accuracy {}/{} (worst accuracy {:.3f}); single blob one {}/{}",
                      two, kAc10Seeds, worst_accuracy, one, kAc10Seeds)};
}

Outcome ac11() {
  int exact = 0;
  std::size_t jumped_total = 0;
  for (int i = 0; i < kAc11Seeds; ++i) {
    const auto honest = generate_honest(ef::testing::geometry_model(1000), seed_for(11, i));
    const auto e = apply_fraud(honest, ef::testing::jump_scenario(), seed_for(11, i));
    const auto truth = e.truth.jumped();
    jumped_total += truth.size();
    const auto r = flag_hyperactive(e.dataset, e.intraday, 0.13);
    if (r.flagged == truth && truth.size() == 200) ++exact;
  }
  return {exact == kAc11Seeds,
          fmt::format("exact recovery (precision = recall = 1) in {}/{}; {} jumps injected", exact,
                      kAc11Seeds, jumped_total)};
}

Outcome ac12() {
  Rng rng(seed_for(12, 0));
  int equal = 0;
  for (int i = 0; i < kAc12Instances; ++i) {
    const auto make = [&](const std::string &prefix, std::size_t n) {
      std::vector<PrecinctRecord> rs;
      for (std::size_t k = 0; k < n; ++k) {
        const Count reg = 20 + static_cast<Count>(rng.below(200));
        const Count cast = static_cast<Count>(rng.below(static_cast<std::uint64_t>(reg) + 1));
        const Count a = static_cast<Count>(rng.below(static_cast<std::uint64_t>(cast) + 1));
        rs.push_back(ef::testing::record(fmt::format("{}{}", prefix, k), reg, cast, {a, cast - a}));
      }
      return ElectionDataset("e", PartyRoster({"A", "B"}), std::move(rs), "A");
    };
    const std::size_t na = 1 + rng.below(100);
    const std::size_t nb = 1 + rng.below(200 - na);
    const auto da = make("a", na), db = make("b", nb);
    const auto c = subset_contrast(da, db);
    std::vector<double> ta, tb;
    for (const auto &r : da.records()) ta.push_back(derive_shares(r).turnout);
    for (const auto &r : db.records()) tb.push_back(derive_shares(r).turnout);
    if (c.ks_turnout == ef::testing::ks_brute_force(ta, tb)) ++equal;
  }
  return {equal == kAc12Instances, fmt::format("{}/{} instances equal", equal, kAc12Instances)};
}

Outcome ac13() {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "ef_acceptance_determinism";
  fs::remove_all(root);
  const auto src = [](const char *rel) { return ef::testing::source_path(rel); };
  const auto synth_dir = root / "synth_base";
  std::ostringstream sink, err;
  run_cli({"synth", "--model", src("data/models/honest.json"), "--scenario",
           src("data/models/stuffing_transfer.json"), "--seed", "13", "--out", synth_dir.string()},
          sink, err);
  const auto precincts = (synth_dir / "precincts.csv").string();
  const auto intraday = (synth_dir / "intraday.csv").string();
  const std::vector<std::pair<std::string, std::vector<std::string>>> pipelines{
      {"synth", {"synth", "--model", src("data/models/honest.json"), "--scenario",
                 src("data/models/rounding.json"), "--seed", "5"}},
      {"peaks", {"peaks", "--in", precincts, "--seed", "5", "--replicates", "500"}},
      {"peaks-leader", {"peaks", "--in", precincts, "--seed", "5", "--quantity", "leader_share",
                        "--null-model", "plug_in", "--replicates", "300"}},
      {"clusters", {"clusters", "--in", precincts, "--seed", "5", "--restarts", "5"}},
      {"scatter", {"scatter", "--in", precincts, "--party", "L", "--party", "others"}},
      {"stuffing", {"stuffing", "--in", precincts, "--window-lo", "0.3", "--window-hi", "0.5"}},
      {"hyperactive", {"hyperactive", "--in", precincts, "--intraday", intraday}},
  };
  int identical = 0;
  std::string mismatched;
  for (const auto &[name, args] : pipelines) {
    std::vector<std::string> reports;
    for (const char *threads : {"1", "4"}) {
      ::setenv("EF_THREADS", threads, 1);
      auto full = args;
      const auto dir = root / fmt::format("{}_{}", name, threads);
      full.insert(full.end(), {"--out", dir.string()});
      std::ostringstream out, e;
      if (run_cli(full, out, e) != kExitOk) {
        reports.push_back("error: " + e.str());
        continue;
      }
      reports.push_back(read_file(dir / "report.json"));
    }
    ::unsetenv("EF_THREADS");
    if (reports.size() == 2 && reports[0] == reports[1] && !reports[0].starts_with("error")) {
      ++identical;
    } else {
      mismatched += " " + name;
    }
  }
  const int total = static_cast<int>(pipelines.size());
  fs::remove_all(root);
  return {identical == total, fmt::format("{}/{} pipelines byte-identical across reruns{}", identical,
                                          total, mismatched.empty() ? "" : ";" + mismatched)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3},   {"AC4", ac4},   {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},   {"AC9", ac9},   {"AC10", ac10},
      {"AC11", ac11}, {"AC12", ac12}, {"AC13", ac13},
  };
  int failures = 0;
  for (const auto &[name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << name << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  std::cout << (failures ? fmt::format("{} criterion(s) failed", failures) : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
