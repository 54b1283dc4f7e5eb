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

#include "ef/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ef/anomaly.hpp"
#include "ef/compare.hpp"
#include "ef/csv.hpp"
#include "ef/dataset.hpp"
#include "ef/dynamics.hpp"
#include "ef/error.hpp"
#include "ef/histogram.hpp"
#include "ef/parallel.hpp"
#include "ef/peaks.hpp"
#include "ef/probkit.hpp"
#include "ef/report.hpp"
#include "ef/scatter.hpp"
#include "ef/svg.hpp"
#include "ef/synth.hpp"

namespace ef {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::vector<std::string> in;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t replicates = 1000;
  double alpha = 0.01;
  bool no_plots = false;
  std::string leader;
};

// Everything one subcommand produces.
struct Outcome {
  explicit Outcome(std::string name) : command(std::move(name)) {}

  std::string command;
  json config = json::object();
  std::vector<InputDigest> inputs;
  json results = json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> assumptions;
  std::map<std::string, std::string> plots;  // file name -> SVG
  std::map<std::string, std::string> files;  // extra outputs, file name -> content
  std::string summary;
};

const std::vector<std::string> &base_assumptions() {
  static const std::vector<std::string> a{
      "ballots_cast is the number of ballots counted",
      "turnout = ballots_cast / registered; party shares use ballots_cast unless stated",
  };
  return a;
}

std::string require_input(const Globals &g, std::size_t index, std::string_view what) {
  if (g.in.size() <= index) {
    fail(ErrorCode::kBadArgument, fmt::format("missing --in for {}", what));
  }
  return g.in[index];
}

std::uint64_t require_seed(const Globals &g) {
  if (!g.seed) fail(ErrorCode::kBadArgument, "this subcommand is randomized and needs --seed");
  return *g.seed;
}

std::string first_party(std::string_view csv_text) {
  const auto rows = csv::read_rows(csv_text);
  if (!rows.empty()) {
    for (const auto &f : rows.front().fields) {
      if (f.starts_with("votes_") && f.size() > 6) return f.substr(6);
    }
  }
  fail(ErrorCode::kMalformedRow, "line 1: header needs at least one votes_ column");
}

ElectionDataset load_dataset(const Globals &g, const std::string &path, Outcome &o,
                             std::string role = "precincts") {
  const auto text = read_file(path);
  o.inputs.push_back(digest_input(std::move(role), path, text));
  const auto election_id = fs::path(path).stem().string();
  if (!g.leader.empty()) return parse_dataset(text, g.leader, election_id);
  auto d = parse_dataset(text, first_party(text), election_id);
  const auto totals = d.party_totals();
  std::size_t best = 0;
  for (std::size_t p = 1; p < totals.size(); ++p) {
    if (totals[p] > totals[best]) best = p;
  }
  if (best != d.leader()) {
    d = ElectionDataset(d.election_id(), d.roster(), d.records(), d.roster().id(best));
  }
  o.assumptions.push_back(fmt::format(
      "no --leader given; using the party with the most votes in {}: {}", path, d.leader_id()));
  return d;
}

json common_config(const Globals &g) {
  return {{"seed", g.seed ? json(*g.seed) : json(nullptr)},
          {"replicates", g.replicates},
          {"alpha", g.alpha},
          {"plots", !g.no_plots},
          {"leader", g.leader.empty() ? json(nullptr) : json(g.leader)}};
}

YMode parse_y_mode(std::string_view text) {
  if (text == "share_of_registered") return YMode::kShareOfRegistered;
  if (text == "share_of_cast") return YMode::kShareOfCast;
  fail(ErrorCode::kBadArgument, fmt::format("unknown --y '{}'", text));
}

Weighting parse_weighting(std::string_view text) {
  if (text == "uniform") return Weighting::kUniform;
  if (text == "registered") return Weighting::kByRegistered;
  fail(ErrorCode::kBadArgument, fmt::format("unknown --weighting '{}'", text));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

PlotSpec bins_plot(const TurnoutBinTable &table) {
  PlotSpec spec;
  spec.title = "votes by turnout bin";
  spec.x = {"turnout", 0.0, 1.0, true};
  double top = 0.0;
  const char *colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  for (std::size_t p = 0; p < table.roster.size(); ++p) {
    PlotSeries line{PlotSeries::Kind::kLine, table.roster.id(p), colors[p % 6], {}, {}, 0.0};
    for (std::size_t b = 0; b < table.bin_count; ++b) {
      const auto v = static_cast<double>(table.votes[b][p]);
      line.points.push_back({(table.bin_lo(b) + table.bin_hi(b)) / 2, v});
      top = std::max(top, v);
    }
    spec.series.push_back(std::move(line));
  }
  spec.y = {"votes", 0.0, top > 0 ? top * 1.05 : 1.0, false};
  return spec;
}

// ---------------------------------------------------------------------------

Outcome cmd_validate(const Globals &g) {
  Outcome o("validate");
  const auto d = load_dataset(g, require_input(g, 0, "validate"), o);
  std::set<std::string> territories;
  std::size_t machine = 0;
  for (const auto &r : d.records()) {
    territories.insert(r.territory);
    machine += r.machine_counted ? 1 : 0;
  }
  json totals = json::object();
  const auto party_totals = d.party_totals();
  for (std::size_t p = 0; p < d.roster().size(); ++p) totals[d.roster().id(p)] = party_totals[p];
  o.results = {{"election_id", d.election_id()},
               {"precincts", d.size()},
               {"parties", d.roster().ids()},
               {"leader", d.leader_id()},
               {"territories", territories.size()},
               {"machine_counted", machine},
               {"total_registered", d.total_registered()},
               {"total_cast", d.total_cast()},
               {"party_totals", totals}};
  o.summary = fmt::format("valid: {} precincts, {} parties", d.size(), d.roster().size());
  return o;
}

Outcome cmd_scatter(const Globals &g, const std::vector<std::string> &parties,
                    const std::string &y_text, const std::string &weighting_text) {
  Outcome o("scatter");
  const auto d = load_dataset(g, require_input(g, 0, "scatter"), o);
  const auto y = parse_y_mode(y_text);
  const auto weighting = parse_weighting(weighting_text);
  std::vector<std::string> chosen = parties;
  if (chosen.empty()) chosen = {d.leader_id(), std::string(kOthersParty)};
  o.config["y"] = y_text;
  o.config["weighting"] = weighting_text;
  o.config["parties"] = chosen;
  json fits = json::object();
  std::vector<ScatterLayer> layers;
  for (const auto &party : chosen) {
    auto points = build_points(d, party, y);
    std::optional<TrendFit> fit;
    try {
      fit = fit_trend(points, weighting);
      fits[party] = to_json(*fit);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kDegenerateX) throw;
      o.warnings.push_back(fmt::format("{}: {}: {}", party, to_string(e.code()), e.what()));
      fits[party] = nullptr;
    }
    layers.push_back({party, std::move(points), fit});
  }
  o.results["fits"] = fits;
  const auto leader_points = build_points(d, d.leader_id(), y);
  if (leader_points.size() >= kMinLinearityPoints) {
    o.results["leader_linearity"] = to_json(superlinearity_check(leader_points));
  } else {
    o.results["leader_linearity"] = nullptr;
    o.warnings.push_back(fmt::format("linearity check skipped: needs at least {} precincts",
                                     kMinLinearityPoints));
  }
  if (!g.no_plots) {
    o.plots["scatter.svg"] =
        render_svg(scatter_plot(d.election_id(), std::string(to_string(y)), layers));
  }
  o.summary = fmt::format("scatter: {} parties fitted", chosen.size());
  return o;
}

Outcome cmd_hist(const Globals &g, const std::string &quantity, const std::string &weight,
                 const std::string &binning) {
  Outcome o("hist");
  const auto d = load_dataset(g, require_input(g, 0, "hist"), o);
  const auto h = integer_percent_histogram(d, parse_quantity(quantity, d),
                                           parse_weight_mode(weight), parse_binning(binning));
  o.config["quantity"] = quantity;
  o.config["weight"] = weight;
  o.config["binning"] = binning;
  o.results["histogram"] = to_json(h);
  if (!g.no_plots && h.total() > 0) o.plots["hist.svg"] = render_svg(histogram_plot(h.label, h));
  o.summary = fmt::format("hist: {} precincts binned", h.included_precincts);
  return o;
}

Outcome cmd_bins(const Globals &g, double width) {
  Outcome o("bins");
  const auto d = load_dataset(g, require_input(g, 0, "bins"), o);
  const auto table = turnout_bin_table(d, width);
  o.config["bin_width"] = width;
  o.results["table"] = to_json(table);
  if (!g.no_plots && !d.empty()) o.plots["bins.svg"] = render_svg(bins_plot(table));
  o.summary = fmt::format("bins: {} turnout bins", table.bin_count);
  return o;
}

Outcome cmd_peaks(const Globals &g, const std::string &quantity, std::vector<int> targets,
                  const std::string &weight, const std::string &binning,
                  const std::string &null_model) {
  Outcome o("peaks");
  const auto d = load_dataset(g, require_input(g, 0, "peaks"), o);
  PeakOptions opt;
  opt.seed = require_seed(g);
  opt.replicates = g.replicates;
  opt.alpha = g.alpha;
  if (!targets.empty()) opt.targets = std::move(targets);
  opt.weight_mode = parse_weight_mode(weight);
  opt.binning = parse_binning(binning);
  opt.null_model = parse_null_model(null_model);
  o.config["quantity"] = quantity;
  o.config["targets"] = opt.targets;
  o.config["weight"] = weight;
  o.config["binning"] = binning;
  o.config["null_model"] = null_model;
  const auto report = detect_round_peaks(d, parse_quantity(quantity, d), opt);
  o.results = to_json(report);
  o.assumptions.push_back(
      "null replicates redraw each precinct's count with its size held fixed; only counting "
      "noise is resampled");
  if (!g.no_plots && report.observed.total() > 0) {
    HistogramOverlay overlay;
    overlay.null_lo.assign(report.null_lo.begin(), report.null_lo.end());
    overlay.null_hi.assign(report.null_hi.begin(), report.null_hi.end());
    overlay.null_mean.assign(report.null_mean.begin(), report.null_mean.end());
    overlay.flagged = report.flagged_targets();
    o.plots["peaks.svg"] = render_svg(histogram_plot(report.quantity, report.observed, overlay));
  }
  const auto flagged = report.flagged_targets();
  std::string list;
  for (int t : flagged) list += (list.empty() ? "" : ",") + std::to_string(t);
  o.summary = fmt::format("peaks: {} flagged target(s){}{}", flagged.size(),
                          flagged.empty() ? "" : ": ", list);
  return o;
}

Outcome cmd_stuffing(const Globals &g, double width, double lo, double hi) {
  Outcome o("stuffing");
  const auto d = load_dataset(g, require_input(g, 0, "stuffing"), o);
  const auto table = turnout_bin_table(d, width);
  const auto est = estimate_stuffing(table, {lo, hi});
  o.config["bin_width"] = width;
  o.config["window"] = {lo, hi};
  o.results = to_json(est);
  o.assumptions.push_back(
      "leader votes in excess of the reference-window leader/non-leader ratio are counted as "
      "anomalous");
  if (!g.no_plots && !d.empty()) o.plots["stuffing.svg"] = render_svg(bins_plot(table));
  o.summary = fmt::format("stuffing: {:.0f} anomalous leader votes of {}", est.total_anomalous,
                          est.leader_total);
  return o;
}

Outcome cmd_clusters(const Globals &g, const std::string &y_text, std::size_t restarts) {
  Outcome o("clusters");
  const auto d = load_dataset(g, require_input(g, 0, "clusters"), o);
  ClusterOptions opt;
  opt.seed = require_seed(g);
  opt.restarts = restarts;
  const auto y = parse_y_mode(y_text);
  o.config["y"] = y_text;
  o.config["restarts"] = restarts;
  const auto points = build_points(d, d.leader_id(), y);
  const auto split = split_two_clusters(points, opt);
  o.results = to_json(split);
  json members = json::array({json::array(), json::array()});
  for (std::size_t i = 0; i < points.size(); ++i) {
    members[static_cast<std::size_t>(split.assignment[i])].push_back(points[i].precinct_id);
  }
  o.results["members"] = members;
  if (!g.no_plots) {
    std::vector<ScatterLayer> layers(2);
    layers[0].label = "component 0";
    layers[1].label = "component 1";
    for (std::size_t i = 0; i < points.size(); ++i) {
      layers[static_cast<std::size_t>(split.assignment[i])].points.push_back(points[i]);
    }
    o.plots["clusters.svg"] = render_svg(scatter_plot(d.election_id(), std::string(to_string(y)), layers));
  }
  o.summary = fmt::format("clusters: {}", split.two_clusters ? "two" : "one");
  return o;
}

Outcome cmd_contrast(const Globals &g, const std::string &split) {
  Outcome o("contrast");
  const auto d = load_dataset(g, require_input(g, 0, "contrast"), o);
  RecordPredicate pred;
  std::string label_in, label_out;
  if (split == "machine_counted") {
    pred = [](const PrecinctRecord &r) { return r.machine_counted; };
    label_in = "machine_counted";
    label_out = "hand_counted";
  } else if (split.starts_with("territory:")) {
    const auto t = split.substr(10);
    pred = [t](const PrecinctRecord &r) { return r.territory == t; };
    label_in = split;
    label_out = "other territories";
  } else if (split.starts_with("tag:")) {
    const auto t = split.substr(4);
    pred = [t](const PrecinctRecord &r) {
      return std::find(r.tags.begin(), r.tags.end(), t) != r.tags.end();
    };
    label_in = split;
    label_out = "untagged";
  } else {
    fail(ErrorCode::kBadArgument,
         fmt::format("unknown --split '{}'; use machine_counted, territory:<id> or tag:<tag>", split));
  }
  auto [inside, outside] = partition(d, pred);
  o.config["split"] = split;
  const auto c = subset_contrast(outside, inside, label_out, label_in);
  o.results = to_json(c, d.roster());
  o.summary = fmt::format("contrast: {} vs {}, KS {:.4f}", label_out, label_in, c.ks_turnout);
  return o;
}

Outcome cmd_delta(const Globals &g) {
  Outcome o("delta");
  const auto first = require_input(g, 0, "delta");
  const auto text_a = read_file(first);
  std::vector<DeltaRow> rows;
  if (g.in.size() >= 2) {
    const auto text_b = read_file(g.in[1]);
    o.inputs.push_back(digest_input("units_a", first, text_a));
    o.inputs.push_back(digest_input("units_b", g.in[1], text_b));
    rows = cross_election_delta(parse_unit_table(text_a), parse_unit_table(text_b));
  } else {
    o.inputs.push_back(digest_input("paired_units", first, text_a));
    const auto [a, b] = parse_paired_unit_table(text_a);
    rows = cross_election_delta(a, b);
  }
  o.results["rows"] = to_json(rows);
  o.results["unit"] = "percentage points";
  o.summary = fmt::format("delta: {} unit(s)", rows.size());
  return o;
}

Outcome cmd_protocol_diff(const Globals &g) {
  Outcome o("protocol-diff");
  const auto path = require_input(g, 0, "protocol-diff");
  const auto text = read_file(path);
  o.inputs.push_back(digest_input("protocols", path, text));
  const auto file = parse_protocols(text);
  std::size_t leader = 0;
  if (!g.leader.empty()) {
    const auto idx = file.roster.index_of(g.leader);
    if (!idx) fail(ErrorCode::kUnknownLeader, fmt::format("leader '{}' is not in the party roster", g.leader));
    leader = *idx;
  } else {
    o.assumptions.push_back(fmt::format("no --leader given; using the first party: {}", file.roster.id(0)));
  }
  const auto summary = protocol_displacements(file.pairs, leader);
  o.results = to_json(summary);
  o.results["leader"] = file.roster.id(leader);
  if (!g.no_plots && !summary.rows.empty()) {
    PlotSpec spec;
    spec.title = "observer protocol vs official";
    spec.x = {"turnout", 0.0, 1.0, true};
    spec.y = {"leader share of cast", 0.0, 1.0, true};
    PlotSeries from{PlotSeries::Kind::kPoints, "observer", "#1f77b4", {}, {}, 0.0};
    PlotSeries to{PlotSeries::Kind::kPoints, "official", "#d62728", {}, {}, 0.0};
    for (const auto &r : summary.rows) {
      from.points.push_back({r.from_turnout, r.from_share});
      to.points.push_back({r.to_turnout, r.to_share});
      spec.series.push_back({PlotSeries::Kind::kLine, {}, "#999999",
                             {{r.from_turnout, r.from_share}, {r.to_turnout, r.to_share}}, {}, 0.0});
    }
    spec.series.push_back(std::move(from));
    spec.series.push_back(std::move(to));
    o.plots["protocols.svg"] = render_svg(spec);
  }
  o.summary = fmt::format("protocol-diff: {} precinct(s)", summary.rows.size());
  return o;
}

Outcome cmd_paired_scan(const Globals &g, Count threshold, const std::string &party) {
  Outcome o("paired-scan");
  const auto a = load_dataset(g, require_input(g, 0, "paired-scan (contest a)"), o, "contest_a");
  const auto b = load_dataset(g, require_input(g, 1, "paired-scan (contest b)"), o, "contest_b");
  o.config["threshold"] = threshold;
  o.config["party"] = party.empty() ? json(nullptr) : json(party);
  const auto scan = paired_contest_scan(a, b, threshold, party);
  o.results = to_json(scan);
  o.summary = fmt::format("paired-scan: {} a>b, {} b>a", scan.a_over_b.size(), scan.b_over_a.size());
  return o;
}

Outcome cmd_hyperactive(const Globals &g, const std::string &intraday_path, double threshold) {
  Outcome o("hyperactive");
  const auto d = load_dataset(g, require_input(g, 0, "hyperactive"), o);
  if (intraday_path.empty()) fail(ErrorCode::kBadArgument, "hyperactive needs --intraday");
  const auto text = read_file(intraday_path);
  o.inputs.push_back(digest_input("intraday", intraday_path, text));
  const auto report = flag_hyperactive(d, parse_intraday(text), threshold);
  o.config["threshold"] = threshold;
  o.results = to_json(report);
  o.warnings.insert(o.warnings.end(), report.warnings.begin(), report.warnings.end());
  o.assumptions.push_back("the threshold is a fraction of registered voters");
  if (!g.no_plots && !report.points.empty()) {
    std::vector<ScatterLayer> layers(2);
    layers[0].label = "hyperactive";
    layers[1].label = "other";
    for (const auto &p : report.points) {
      layers[p.flagged ? 0 : 1].points.push_back({p.precinct_id, p.turnout, p.leader_share, 0.0});
    }
    o.plots["hyperactive.svg"] =
        render_svg(scatter_plot(d.election_id(), "leader share of cast", layers));
  }
  o.summary = fmt::format("hyperactive: {} flagged, {} without series", report.flagged.size(),
                          report.missing_series.size());
  return o;
}

json parse_json_file(const std::string &path, Outcome &o, std::string role) {
  const auto text = read_file(path);
  o.inputs.push_back(digest_input(std::move(role), path, text));
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    fail(ErrorCode::kInvalidModel, fmt::format("{}: {}", path, e.what()));
  }
}

Outcome cmd_synth(const Globals &g, const std::string &model_path, const std::string &scenario_path) {
  Outcome o("synth");
  const auto seed = require_seed(g);
  if (g.out.empty()) fail(ErrorCode::kBadArgument, "synth needs --out");
  if (model_path.empty()) fail(ErrorCode::kBadArgument, "synth needs --model");
  const auto model = honest_model_from_json(parse_json_file(model_path, o, "model"));
  FraudScenario scenario;
  if (!scenario_path.empty()) scenario = scenario_from_json(parse_json_file(scenario_path, o, "scenario"));
  auto election = apply_fraud(generate_honest(model, seed), scenario, seed);
  o.config["model"] = to_json(model);
  o.config["scenario"] = to_json(scenario);
  o.results["precincts"] = election.dataset.size();
  o.results["total_registered"] = election.dataset.total_registered();
  o.results["total_cast"] = election.dataset.total_cast();
  o.results["ground_truth"] = to_json(election.truth);
  o.results["files"] = {"precincts.csv", "intraday.csv", "ground_truth.csv"};
  for (const auto &line : election.truth.log) o.warnings.push_back(line);
  o.files["precincts.csv"] = serialize_dataset(election.dataset);
  o.files["intraday.csv"] = serialize_intraday(election.intraday);
  o.files["ground_truth.csv"] = serialize_ground_truth(election.truth);
  o.summary = fmt::format("synth: {} precincts", election.dataset.size());
  return o;
}

struct ProbArgs {
  std::string likelihood_a, prior_a, likelihood_b, prior_b;
  std::string p;
  std::uint64_t n = 0;
  std::int64_t total = 0, marked = 0;
  std::optional<std::int64_t> observed;
  bool exact = false;
};

Outcome cmd_prob(const std::string &which, const ProbArgs &a) {
  Outcome o("prob " + which);
  o.config["exact"] = a.exact;
  if (which == "odds") {
    const auto r = posterior_odds(parse_decimal(a.likelihood_a), parse_decimal(a.prior_a),
                                  parse_decimal(a.likelihood_b), parse_decimal(a.prior_b));
    o.config["likelihood_a"] = a.likelihood_a;
    o.config["prior_a"] = a.prior_a;
    o.config["likelihood_b"] = a.likelihood_b;
    o.config["prior_b"] = a.prior_b;
    o.results = to_json(r);
    o.summary = fmt::format("odds B:A = {}{}", format_significant(r.ratio, 15),
                            a.exact ? fmt::format(" ({})", format_fraction(r.ratio)) : "");
  } else if (which == "run") {
    const auto p = parse_decimal(a.p);
    const double value = run_probability(to_double(p), a.n);
    o.config["p"] = a.p;
    o.config["n"] = a.n;
    o.results = {{"probability", value}};
    std::string exact_text;
    if (a.exact) {
      exact_text = format_fraction(run_probability_exact(p, a.n));
      o.results["fraction"] = exact_text;
    }
    o.summary = fmt::format("p^n = {}{}", value, a.exact ? " (" + exact_text + ")" : "");
  } else if (which == "coincidence") {
    const auto observed = a.observed.value_or(a.marked);
    const auto c = subset_coincidence(a.total, a.marked, observed);
    o.config["total"] = a.total;
    o.config["marked"] = a.marked;
    o.config["observed"] = observed;
    o.results = to_json(c);
    o.summary = fmt::format("probability = {:.6g}{}", c.probability,
                            a.exact && c.fraction() ? " (" + format_fraction(*c.fraction()) + ")" : "");
  } else {
    const auto p = parse_decimal(a.p);
    const auto n = static_cast<std::int64_t>(a.n);
    const double sigma = proportion_sigma(to_double(p), n);
    o.config["p"] = a.p;
    o.config["n"] = a.n;
    o.results = {{"sigma", sigma}};
    o.summary = fmt::format("sigma = {}", sigma);
  }
  return o;
}

void emit(const Globals &g, Outcome &o, const std::vector<std::string> &args, std::ostream &out) {
  auto config = common_config(g);
  for (const auto &[k, v] : o.config.items()) config[k] = v;
  auto assumptions = base_assumptions();
  assumptions.insert(assumptions.end(), o.assumptions.begin(), o.assumptions.end());
  const auto report = make_report(o.command, config, o.inputs, o.results, o.warnings, assumptions);
  if (g.out.empty()) {
    out << dump_report(report);
    return;
  }
  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, fmt::format("cannot create '{}': {}", g.out, ec.message()));
  for (const auto &[name, content] : o.files) write_atomic(dir / name, content);
  if (!g.no_plots) {
    for (const auto &[name, svg] : o.plots) write_atomic(dir / name, svg);
  }
  write_atomic(dir / "report.json", dump_report(report));
  const json meta = {{"timestamp", utc_timestamp()},
                     {"argv", args},
                     {"threads", thread_count()},
                     {"out", g.out},
                     {"version", std::string(kVersion)}};
  write_atomic(dir / "run_meta.json", meta.dump(2) + "\n");
  out << o.summary << "\n" << "wrote " << (dir / "report.json").string() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Precinct-level election diagnostics", "ef"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  Globals g;
  app.add_option("--in", g.in, "input file(s); repeat for commands that take two");
  app.add_option("--out", g.out, "output directory (report.json, plots); stdout when omitted");
  app.add_option("--seed", g.seed, "seed for randomized commands (required there)");
  app.add_option("--replicates", g.replicates, "Monte-Carlo replicates")->check(CLI::PositiveNumber);
  app.add_option("--alpha", g.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  app.add_flag("--no-plots", g.no_plots, "skip SVG output");
  app.add_option("--leader", g.leader, "party id of the leader (default: most votes)");

  std::function<Outcome()> action;

  auto *validate = app.add_subcommand("validate", "parse and check a precinct file");
  validate->callback([&] { action = [&] { return cmd_validate(g); }; });

  std::vector<std::string> scatter_parties;
  std::string y_mode = "share_of_registered", weighting = "uniform";
  auto *scatter = app.add_subcommand("scatter", "turnout vs share fields and trend fits");
  scatter->add_option("--party", scatter_parties, "party id or 'others' (repeatable)");
  scatter->add_option("--y", y_mode, "share_of_registered | share_of_cast");
  scatter->add_option("--weighting", weighting, "uniform | registered");
  scatter->callback([&] { action = [&] { return cmd_scatter(g, scatter_parties, y_mode, weighting); }; });

  std::string quantity = "turnout", weight = "precincts", binning = "half_up";
  auto *hist = app.add_subcommand("hist", "integer-percent histogram");
  hist->add_option("--quantity", quantity, "turnout | leader_share | <party id>");
  hist->add_option("--weight", weight, "precincts | registered | ballots");
  hist->add_option("--binning", binning, "half_up | truncate");
  hist->callback([&] { action = [&] { return cmd_hist(g, quantity, weight, binning); }; });

  double bin_width = 0.01;
  auto *bins = app.add_subcommand("bins", "votes per party by turnout bin");
  bins->add_option("--bin-width", bin_width, "turnout bin width");
  bins->callback([&] { action = [&] { return cmd_bins(g, bin_width); }; });

  std::vector<int> targets;
  std::string null_model = "deconvolved";
  auto *peaks = app.add_subcommand("peaks", "round-number peak test");
  peaks->add_option("--quantity", quantity, "turnout | leader_share | <party id>");
  peaks->add_option("--targets", targets, "integer percents, comma separated")->delimiter(',');
  peaks->add_option("--weight", weight, "precincts | registered | ballots");
  peaks->add_option("--binning", binning, "half_up | truncate");
  peaks->add_option("--null-model", null_model, "deconvolved | posterior_predictive | plug_in");
  peaks->callback([&] {
    action = [&] { return cmd_peaks(g, quantity, targets, weight, binning, null_model); };
  });

  double window_lo = 0.15, window_hi = 0.35;
  auto *stuffing = app.add_subcommand("stuffing", "excess leader votes relative to a turnout window");
  stuffing->add_option("--bin-width", bin_width, "turnout bin width");
  stuffing->add_option("--window-lo", window_lo, "reference window lower edge");
  stuffing->add_option("--window-hi", window_hi, "reference window upper edge");
  stuffing->callback([&] { action = [&] { return cmd_stuffing(g, bin_width, window_lo, window_hi); }; });

  std::size_t restarts = 20;
  std::string cluster_y = "share_of_cast";
  auto *clusters = app.add_subcommand("clusters", "one vs two cluster split of the leader field");
  clusters->add_option("--y", cluster_y, "share_of_registered | share_of_cast");
  clusters->add_option("--restarts", restarts, "EM restarts")->check(CLI::PositiveNumber);
  clusters->callback([&] { action = [&] { return cmd_clusters(g, cluster_y, restarts); }; });

  std::string split = "machine_counted";
  auto *contrast = app.add_subcommand("contrast", "compare two subsets of precincts");
  contrast->add_option("--split", split, "machine_counted | territory:<id> | tag:<tag>");
  contrast->callback([&] { action = [&] { return cmd_contrast(g, split); }; });

  auto *delta = app.add_subcommand("delta", "per-unit change between two elections");
  delta->callback([&] { action = [&] { return cmd_delta(g); }; });

  auto *protocol = app.add_subcommand("protocol-diff", "observer protocols vs official numbers");
  protocol->callback([&] { action = [&] { return cmd_protocol_diff(g); }; });

  Count scan_threshold = 300;
  std::string scan_party;
  auto *paired = app.add_subcommand("paired-scan", "vote gaps between two contests at shared precincts");
  paired->add_option("--threshold", scan_threshold, "minimum gap in votes (strict)");
  paired->add_option("--party", scan_party, "party id (default: leader)");
  paired->callback([&] { action = [&] { return cmd_paired_scan(g, scan_threshold, scan_party); }; });

  std::string intraday;
  double hyper_threshold = kDefaultHyperactiveThreshold;
  auto *hyper = app.add_subcommand("hyperactive", "late turnout jumps from intraday reports");
  hyper->add_option("--intraday", intraday, "intraday.csv");
  hyper->add_option("--threshold", hyper_threshold, "fraction of registered");
  hyper->callback([&] { action = [&] { return cmd_hyperactive(g, intraday, hyper_threshold); }; });

  std::string model_path, scenario_path;
  auto *synth = app.add_subcommand("synth", "generate a synthetic election");
  synth->add_option("--model", model_path, "honest model JSON");
  synth->add_option("--scenario", scenario_path, "fraud scenario JSON");
  synth->callback([&] { action = [&] { return cmd_synth(g, model_path, scenario_path); }; });

  ProbArgs pa;
  auto *prob = app.add_subcommand("prob", "probability utilities");
  prob->require_subcommand(1, 1);
  prob->fallthrough();
  prob->add_flag("--exact", pa.exact, "also print exact fractions");
  auto *odds = prob->add_subcommand("odds", "posterior odds of B against A");
  odds->add_option("--likelihood-a", pa.likelihood_a)->required();
  odds->add_option("--prior-a", pa.prior_a)->required();
  odds->add_option("--likelihood-b", pa.likelihood_b)->required();
  odds->add_option("--prior-b", pa.prior_b)->required();
  odds->callback([&] { action = [&] { return cmd_prob("odds", pa); }; });
  auto *run = prob->add_subcommand("run", "probability of n equal outcomes in a row");
  run->add_option("--p", pa.p)->required();
  run->add_option("--n", pa.n)->required();
  run->callback([&] { action = [&] { return cmd_prob("run", pa); }; });
  auto *coincidence = prob->add_subcommand("coincidence", "chance a random subset matches a fixed one");
  coincidence->add_option("--total", pa.total)->required();
  coincidence->add_option("--marked", pa.marked)->required();
  coincidence->add_option("--observed", pa.observed);
  coincidence->callback([&] { action = [&] { return cmd_prob("coincidence", pa); }; });
  auto *sigma = prob->add_subcommand("sigma", "sampling sd of a proportion");
  sigma->add_option("--p", pa.p)->required();
  sigma->add_option("--n", pa.n)->required();
  sigma->callback([&] { action = [&] { return cmd_prob("sigma", pa); }; });

  if (!args.empty() && !args.front().starts_with("-") && !app.get_subcommand_no_throw(args.front())) {
    err << "ERROR BadArgument: unknown subcommand '" << args.front() << "'\n" << app.help();
    return kExitValidation;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion &) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "ERROR BadArgument: " << e.what() << "\n" << app.help();
    return kExitValidation;
  }

  try {
    auto outcome = action();
    emit(g, outcome, args, out);
    return kExitOk;
  } catch (const Error &e) {
    err << "ERROR " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kIo ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error &e) {
    err << "ERROR Io: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception &e) {
    err << "ERROR Internal: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace ef
