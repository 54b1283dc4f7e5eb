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

#include "ef/error.hpp"
#include "ef/report.hpp"
#include "support/oracles.hpp"
#include "support/schema_check.hpp"

using namespace ef;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_SUITE("report") {
  TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("envelope validates against the shipped schema") {
    const auto schema = json::parse(read_file(ef::testing::source_path("schema/report.schema.json")));
    const json config = {{"seed", 3}, {"replicates", 1000}, {"alpha", 0.01}, {"plots", true}, {"leader", "A"}};
    const auto r = make_report("peaks", config, {digest_input("precincts", "x.csv", "abc")},
                               json{{"flagged_targets", json::array()}}, {"w"}, {"a"});
    CHECK(ef::testing::schema_violations(schema, r).empty());
    CHECK(r["caveat"] == std::string(kCaveat));
    CHECK(r["tool"]["version"] == std::string(kVersion));
    CHECK(r["inputs"][0]["bytes"] == 3);
    auto broken = r;
    broken.erase("caveat");
    CHECK_FALSE(ef::testing::schema_violations(schema, broken).empty());
    broken = r;
    broken["inputs"][0]["sha256"] = "XYZ";
    CHECK_FALSE(ef::testing::schema_violations(schema, broken).empty());
    broken = r;
    broken["command"] = "guess";
    CHECK_FALSE(ef::testing::schema_violations(schema, broken).empty());
  }

  TEST_CASE("dump is stable") {
    const auto r = make_report("delta", json::object(), {}, json::object());
    CHECK(dump_report(r) == dump_report(json::parse(dump_report(r))));
    CHECK(dump_report(r).back() == '\n');
  }

  TEST_CASE("odds and coincidence json") {
    const auto o = to_json(posterior_odds(Rational(9, 10), Rational(1, 1000000), Rational(1, 10), Rational(1, 1000)));
    CHECK(o["ratio"] == "1000/9");
    CHECK(o["mixed"] == "111 1/9");
    CHECK(o["decimal"] == "111.111111111111");
    CHECK(o["favored"] == "B");
    const auto c = to_json(subset_coincidence(42, 6, 6));
    CHECK(c["subsets"] == "5245786");
    CHECK(c["fraction"] == "1/5245786");
  }

  TEST_CASE("atomic write and read") {
    const auto dir = fs::temp_directory_path() / "ef_report_test";
    fs::create_directories(dir);
    write_atomic(dir / "a.txt", "hello");
    CHECK(read_file(dir / "a.txt") == "hello");
    write_atomic(dir / "a.txt", "again");
    CHECK(read_file(dir / "a.txt") == "again");
    std::size_t leftovers = 0;
    for (const auto &e : fs::directory_iterator(dir)) leftovers += e.path().filename() != "a.txt";
    CHECK(leftovers == 0);
    try {
      read_file(dir / "missing.txt");
      FAIL("read a missing file");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kIo);
    }
    CHECK_THROWS_AS(write_atomic(dir / "no" / "such" / "dir.txt", "x"), Error);
    fs::remove_all(dir);
  }
}
