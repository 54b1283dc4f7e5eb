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

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "ef/cli.hpp"
#include "ef/report.hpp"
#include "support/oracles.hpp"
#include "support/schema_check.hpp"

using namespace ef;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string src(const std::string &rel) { return ef::testing::source_path(rel); }

fs::path scratch(const std::string &name) {
  const auto dir = fs::temp_directory_path() / ("ef_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

json schema() { return json::parse(read_file(src("schema/report.schema.json"))); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("unknown subcommand exits 1 with usage") {
    const auto r = run({"frobnicate"});
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("ERROR BadArgument") == 0);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == kExitValidation);
    CHECK(run({"hist", "--bogus"}).code == kExitValidation);
  }

  TEST_CASE("missing input file exits 2") {
    const auto r = run({"validate", "--in", "/nonexistent/precincts.csv"});
    CHECK(r.code == kExitIo);
    CHECK(r.err.find("ERROR Io:") == 0);
  }

  TEST_CASE("validation errors exit 1") {
    const auto dir = scratch("bad");
    fs::create_directories(dir);
    write_atomic(dir / "p.csv",
                 "precinct_id,region,territory,registered,ballots_cast,invalid,machine_counted,votes_A\n"
                 "p1,R,T,100,50,0,0,60\n");
    const auto r = run({"validate", "--in", (dir / "p.csv").string()});
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("ERROR InvariantViolation:") == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("randomized commands need a seed") {
    const auto r = run({"peaks", "--in", src("data/fixtures/rounding_precincts.csv")});
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("--seed") != std::string::npos);
  }

  TEST_CASE("delta on the nine-district fixture") {
    const auto r = run({"delta", "--in", src("data/table1.csv")});
    REQUIRE(r.code == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(ef::testing::schema_violations(schema(), j).empty());
    const auto &row = j["results"]["rows"][0];
    CHECK(row["unit"] == "Kanavinsky");
    CHECK(row["share_delta"] == "-3.68");
    CHECK(row["turnout_delta"] == "+19.82");
  }

  TEST_CASE("peaks on the shipped rounding fixture flags exactly the four targets") {
    const auto r = run({"peaks", "--in", src("data/fixtures/rounding_precincts.csv"), "--seed", "1",
                        "--leader", "L"});
    REQUIRE(r.code == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(j["results"]["flagged_targets"] == json::array({70, 75, 80, 85}));
    CHECK(j["caveat"] == std::string(kCaveat));
    CHECK(ef::testing::schema_violations(schema(), j).empty());
  }

  TEST_CASE("out directory gets report, plots and sidecar; reports repeat byte for byte") {
    const auto a = scratch("out_a"), b = scratch("out_b");
    for (const auto &dir : {a, b}) {
      const auto r = run({"peaks", "--in", src("data/fixtures/rounding_precincts.csv"), "--seed", "9",
                          "--replicates", "200", "--out", dir.string()});
      REQUIRE(r.code == kExitOk);
      CHECK(r.out.find("report.json") != std::string::npos);
      CHECK(fs::exists(dir / "peaks.svg"));
      CHECK(fs::exists(dir / "run_meta.json"));
    }
    CHECK(read_file(a / "report.json") == read_file(b / "report.json"));
    CHECK(read_file(a / "peaks.svg") == read_file(b / "peaks.svg"));
    const auto nop = scratch("out_noplot");
    REQUIRE(run({"peaks", "--in", src("data/fixtures/rounding_precincts.csv"), "--seed", "9",
                 "--replicates", "200", "--no-plots", "--out", nop.string()})
                .code == kExitOk);
    CHECK_FALSE(fs::exists(nop / "peaks.svg"));
    for (const auto &d : {a, b, nop}) fs::remove_all(d);
  }

  TEST_CASE("every subcommand emits a schema-valid report with the caveat") {
    const auto dir = scratch("all");
    fs::create_directories(dir);
    const auto s = schema();
    const auto synth = run({"synth", "--model", src("data/models/honest.json"), "--scenario",
                            src("data/models/stuffing_transfer.json"), "--seed", "4", "--out",
                            (dir / "syn").string()});
    REQUIRE(synth.code == kExitOk);
    const auto precincts = (dir / "syn" / "precincts.csv").string();
    const auto intraday = (dir / "syn" / "intraday.csv").string();
    CHECK(fs::exists(dir / "syn" / "ground_truth.csv"));
    CHECK(ef::testing::schema_violations(s, json::parse(read_file(dir / "syn" / "report.json"))).empty());
    const std::vector<std::vector<std::string>> commands{
        {"validate", "--in", precincts},
        {"scatter", "--in", precincts, "--party", "L", "--party", "others"},
        {"hist", "--in", precincts, "--quantity", "leader_share"},
        {"bins", "--in", precincts, "--bin-width", "0.05"},
        {"peaks", "--in", precincts, "--seed", "2", "--replicates", "200"},
        {"stuffing", "--in", precincts, "--window-lo", "0.3", "--window-hi", "0.5"},
        {"clusters", "--in", precincts, "--seed", "2", "--restarts", "3"},
        {"contrast", "--in", precincts, "--split", "machine_counted"},
        {"contrast", "--in", precincts, "--split", "territory:T01"},
        {"delta", "--in", src("data/table1.csv")},
        {"protocol-diff", "--in", src("data/fixtures/protocols.csv")},
        {"paired-scan", "--in", src("data/fixtures/spb_federal.csv"), "--in", src("data/fixtures/spb_local.csv")},
        {"hyperactive", "--in", precincts, "--intraday", intraday},
        {"prob", "odds", "--likelihood-a", "0.9", "--prior-a", "1e-6", "--likelihood-b", "0.1", "--prior-b", "1e-3"},
        {"prob", "run", "--p", "0.5", "--n", "20"},
        {"prob", "coincidence", "--total", "42", "--marked", "6"},
        {"prob", "sigma", "--p", "0.5", "--n", "1000"},
    };
    for (const auto &c : commands) {
      CAPTURE(c[0]);
      CAPTURE(c.size() > 1 ? c[1] : "");
      const auto r = run(c);
      REQUIRE_MESSAGE(r.code == kExitOk, r.err);
      const auto j = json::parse(r.out);
      const auto v = ef::testing::schema_violations(s, j);
      CHECK_MESSAGE(v.empty(), (v.empty() ? "" : v.front()));
      CHECK(r.out.find(std::string(kCaveat)) != std::string::npos);
    }
    fs::remove_all(dir);
  }

  TEST_CASE("prob outputs") {
    auto j = json::parse(run({"prob", "odds", "--likelihood-a", "0.9", "--prior-a", "1e-6", "--likelihood-b", "0.1",
                              "--prior-b", "1e-3"})
                             .out);
    CHECK(j["results"]["ratio"] == "1000/9");
    j = json::parse(run({"prob", "coincidence", "--total", "42", "--marked", "6", "--observed", "6"}).out);
    CHECK(j["results"]["subsets"] == "5245786");
    const auto bad = run({"prob", "coincidence", "--total", "42", "--marked", "6", "--observed", "5"});
    CHECK(bad.code == kExitValidation);
    CHECK(bad.err.find("ERROR BadCounts:") == 0);
    const auto nonpos = run({"prob", "odds", "--likelihood-a", "0", "--prior-a", "1e-6", "--likelihood-b", "0.1",
                             "--prior-b", "1e-3"});
    CHECK(nonpos.code == kExitValidation);
    CHECK(nonpos.err.find("ERROR NonPositiveInput:") == 0);
  }

  TEST_CASE("leader defaults to the party with most votes and is recorded") {
    const auto r = run({"paired-scan", "--in", src("data/fixtures/spb_federal.csv"), "--in",
                        src("data/fixtures/spb_local.csv")});
    REQUIRE(r.code == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(j["results"]["party"] == "ER");
    bool noted = false;
    for (const auto &a : j["assumptions"]) noted = noted || a.get<std::string>().find("ER") != std::string::npos;
    CHECK(noted);
  }
}
