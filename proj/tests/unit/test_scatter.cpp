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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ef/error.hpp"
#include "ef/rng.hpp"
#include "ef/scatter.hpp"
#include "ef/synth.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

using namespace ef;
using ef::testing::record;

namespace {

ElectionDataset make(std::vector<PrecinctRecord> records) {
  return ElectionDataset("e", PartyRoster({"A", "B"}), std::move(records), "A");
}

std::vector<ScatterPoint> line(double slope, double intercept, int n) {
  std::vector<ScatterPoint> pts;
  for (int i = 0; i < n; ++i) {
    const double x = 0.1 + 0.8 * i / (n - 1);
    pts.push_back({fmt::format("p{}", i), x, intercept + slope * x, 1000.0 + i});
  }
  return pts;
}

}  // namespace

TEST_SUITE("scatter") {
  TEST_CASE("all votes to one party lie on the diagonal") {
    std::vector<PrecinctRecord> rs;
    for (int i = 1; i <= 20; ++i) rs.push_back(record(fmt::format("p{}", i), 1000, 40 * i, {40 * i, 0}));
    const auto pts = build_points(make(rs), "A", YMode::kShareOfRegistered);
    REQUIRE(pts.size() == 20);
    for (const auto &p : pts) CHECK(p.y == doctest::Approx(p.x));
    const auto fit = fit_trend(pts);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fit.intercept) < 1e-12);
  }

  TEST_CASE("no valid votes puts every point on the x axis") {
    std::vector<PrecinctRecord> rs;
    for (int i = 1; i <= 10; ++i) rs.push_back(record(fmt::format("p{}", i), 1000, 50 * i, {0, 0}, 50 * i));
    for (const auto &p : build_points(make(rs), "A", YMode::kShareOfRegistered)) CHECK(p.y == 0.0);
  }

  TEST_CASE("fixed turnout gives a vertical line") {
    std::vector<PrecinctRecord> rs;
    for (int i = 0; i < 10; ++i) rs.push_back(record(fmt::format("p{}", i), 1000, 500, {50 * i, 10}));
    const auto pts = build_points(make(rs), "B", YMode::kShareOfRegistered);
    for (const auto &p : pts) CHECK(p.x == 0.5);
    CHECK_THROWS_AS(fit_trend(pts), Error);
  }

  TEST_CASE("others aggregates every non-leader party") {
    const auto d = make({record("p1", 1000, 600, {300, 200}, 100)});
    const auto o = build_points(d, kOthersParty, YMode::kShareOfCast);
    CHECK(o[0].y == doctest::Approx(200.0 / 600.0));
    CHECK_THROWS_AS(build_points(d, "Q", YMode::kShareOfCast), Error);
  }

  TEST_CASE("exact lines") {
    const auto diag = fit_trend(line(1.0, 0.0, 30));
    CHECK(std::abs(diag.slope - 1.0) < 1e-12);
    CHECK(std::abs(diag.intercept) < 1e-12);
    const auto flat = fit_trend(line(0.0, 0.15, 30));
    CHECK(std::abs(flat.slope) < 1e-12);
    CHECK(flat.intercept == doctest::Approx(0.15));
    CHECK(flat.point_count == 30);
    CHECK(flat.residual_rms < 1e-12);
  }

  TEST_CASE("fit is invariant under permutation and duplication") {
    Rng rng(4);
    std::vector<ScatterPoint> pts;
    for (int i = 0; i < 200; ++i) {
      const double x = rng.uniform(0.2, 0.9);
      pts.push_back({fmt::format("p{}", i), x, 0.3 * x + rng.normal(0, 0.05), rng.uniform(100, 3000)});
    }
    for (auto w : {Weighting::kUniform, Weighting::kByRegistered}) {
      const auto base = fit_trend(pts, w);
      auto shuffled = pts;
      std::reverse(shuffled.begin(), shuffled.end());
      std::rotate(shuffled.begin(), shuffled.begin() + 77, shuffled.end());
      const auto perm = fit_trend(shuffled, w);
      CHECK(perm.slope == doctest::Approx(base.slope).epsilon(1e-12));
      CHECK(perm.intercept == doctest::Approx(base.intercept).epsilon(1e-12));
      auto doubled = pts;
      doubled.insert(doubled.end(), pts.begin(), pts.end());
      const auto dup = fit_trend(doubled, w);
      CHECK(dup.slope == doctest::Approx(base.slope).epsilon(1e-12));
      CHECK(dup.intercept == doctest::Approx(base.intercept).epsilon(1e-12));
      CHECK(dup.point_count == 400);
    }
  }

  TEST_CASE("fewer than two points is degenerate") {
    const std::vector<ScatterPoint> one{line(1.0, 0.0, 30).front()};
    CHECK_THROWS_AS(fit_trend(one), Error);
    CHECK_THROWS_AS(fit_trend(std::vector<ScatterPoint>{}), Error);
  }

  TEST_CASE("synthetic field: sizes, y <= x, stuffed slopes") {
    auto model = ef::testing::geometry_model(3000);
    const auto honest = generate_honest(model, 21);
    const auto e = apply_fraud(honest, ef::testing::stuffing_only(), 21);
    for (const auto &party : std::vector<std::string>{"L", "B", "C", "D", "E", "others"}) {
      const auto pts = build_points(e.dataset, party, YMode::kShareOfRegistered);
      CHECK(pts.size() == e.dataset.size());
      for (const auto &p : pts) REQUIRE(p.y <= p.x + 1e-15);
    }
    const auto leader = fit_trend(build_points(e.dataset, "L", YMode::kShareOfRegistered));
    CHECK(leader.slope >= 0.7);
    CHECK(leader.slope <= 1.0);
    for (const auto &party : std::vector<std::string>{"B", "C", "D", "E"}) {
      const auto f = fit_trend(build_points(e.dataset, party, YMode::kShareOfRegistered));
      CHECK(std::abs(f.slope) <= 0.1);
    }
  }
}
