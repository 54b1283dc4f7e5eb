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

#include <fmt/format.h>

#include "ef/error.hpp"
#include "ef/histogram.hpp"
#include "ef/synth.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

using namespace ef;
using ef::testing::record;

namespace {

ElectionDataset make(std::vector<PrecinctRecord> records) {
  return ElectionDataset("e", PartyRoster({"A", "B"}), std::move(records), "A");
}

Count sum_except(const IntegerPercentHistogram &h, int bin) {
  Count s = 0;
  for (int b = 0; b < kPercentBins; ++b) {
    if (b != bin) s += h.bins[static_cast<std::size_t>(b)];
  }
  return s;
}

}  // namespace

TEST_SUITE("histogram") {
  TEST_CASE("two precincts at exactly 75%") {
    const auto d = make({record("p1", 1000, 400, {300, 100}), record("p2", 2000, 800, {600, 200})});
    const auto h = integer_percent_histogram(d, Quantity::leader_share());
    CHECK(h.bins[75] == 2);
    CHECK(sum_except(h, 75) == 0);
    CHECK(h.label == "leader_share_of_cast");
  }

  TEST_CASE("one of three lands in bin 33") {
    const auto h = integer_percent_histogram(make({record("p", 10, 3, {1, 2})}), Quantity::leader_share());
    CHECK(h.bins[33] == 1);
  }

  TEST_CASE("half-up and truncate binning") {
    CHECK(percent_bin(101, 200, Binning::kHalfUp) == 51);
    CHECK(percent_bin(101, 200, Binning::kTruncate) == 50);
    CHECK(percent_bin(2, 3, Binning::kHalfUp) == 67);
    CHECK(percent_bin(2, 3, Binning::kTruncate) == 66);
    CHECK(percent_bin(0, 7, Binning::kHalfUp) == 0);
    CHECK(percent_bin(7, 7, Binning::kTruncate) == 100);
    CHECK(percent_bin(199, 200, Binning::kHalfUp) == 100);
  }

  TEST_CASE("precincts with no ballots are skipped for share quantities") {
    const auto d = make({record("p1", 1000, 0, {0, 0}), record("p2", 1000, 500, {250, 250})});
    const auto share = integer_percent_histogram(d, Quantity::leader_share());
    CHECK(share.included_precincts == 1);
    const auto turnout = integer_percent_histogram(d, Quantity::turnout());
    CHECK(turnout.included_precincts == 2);
    CHECK(turnout.bins[0] == 1);
    CHECK(turnout.bins[50] == 1);
  }

  TEST_CASE("weight modes") {
    const auto d = make({record("p1", 1000, 500, {250, 250}), record("p2", 3000, 1500, {100, 1400})});
    CHECK(integer_percent_histogram(d, Quantity::turnout(), WeightMode::kRegistered).bins[50] == 4000);
    CHECK(integer_percent_histogram(d, Quantity::turnout(), WeightMode::kBallots).bins[50] == 2000);
    const auto b = integer_percent_histogram(d, Quantity::party_share(1), WeightMode::kBallots);
    CHECK(b.bins[50] == 500);
    CHECK(b.bins[93] == 1500);
    CHECK(b.label == "share_of_cast:B");
  }

  TEST_CASE("quantity parsing") {
    const auto d = make({record("p1", 1000, 500, {250, 250})});
    CHECK(parse_quantity("turnout", d).kind == Quantity::Kind::kTurnout);
    CHECK(parse_quantity("leader_share", d).label(d) == "leader_share_of_cast");
    CHECK(parse_quantity("share_of_cast:B", d).party == std::optional<std::size_t>(1));
    CHECK(parse_quantity("B", d).party == std::optional<std::size_t>(1));
    CHECK_THROWS_AS(parse_quantity("Q", d), Error);
    CHECK(parse_weight_mode("registered") == WeightMode::kRegistered);
    CHECK(parse_binning("truncate") == Binning::kTruncate);
    CHECK_THROWS_AS(parse_weight_mode("votes"), Error);
  }

  TEST_CASE("turnout bin table single precinct") {
    const auto t = turnout_bin_table(make({record("p", 1000, 550, {370, 180})}), 0.01);
    CHECK(t.bin_count == 100);
    CHECK(t.votes[55][0] == 370);
    CHECK(t.votes[55][1] == 180);
    CHECK(t.bin_lo(55) == doctest::Approx(0.55));
    CHECK(t.bin_hi(55) == doctest::Approx(0.56));
    CHECK(t.precincts[55] == 1);
    CHECK(t.total_ballots() == 550);
  }

  TEST_CASE("full turnout goes to the last bin") {
    const auto t = turnout_bin_table(make({record("p", 100, 100, {60, 40})}), 0.05);
    CHECK(t.bin_count == 20);
    CHECK(t.votes[19][0] == 60);
  }

  TEST_CASE("bad bin widths") {
    const auto d = make({record("p", 100, 50, {30, 20})});
    for (double w : {0.0, -0.1, 1.5, 0.03}) {
      try {
        turnout_bin_table(d, w);
        FAIL("accepted width " << w);
      } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::kBadBinWidth);
      }
    }
  }

  TEST_CASE("conservation and repeatability on a synthetic dataset") {
    auto m = ef::testing::geometry_model(2000);
    m.territories = 3;
    const auto e = generate_honest(m, 5);
    for (auto q : {Quantity::turnout(), Quantity::leader_share(), Quantity::party_share(2)}) {
      const auto h = integer_percent_histogram(e.dataset, q);
      CHECK(h.total() == static_cast<Count>(h.included_precincts));
      CHECK(h.included_weight == h.total());
      CHECK(integer_percent_histogram(e.dataset, q).bins == h.bins);
    }
    for (double w : {0.01, 0.02, 0.05, 0.1}) {
      const auto t = turnout_bin_table(e.dataset, w);
      CHECK(t.party_totals() == e.dataset.party_totals());
      CHECK(t.total_ballots() == e.dataset.total_cast());
    }
  }

  TEST_CASE("stuffing gives the leader a high-turnout tail") {
    const auto honest = generate_honest(ef::testing::geometry_model(3000), 17);
    FraudScenario s;
    s.stuffing = {0.3, 0.5, 0.5};
    const auto e = apply_fraud(honest, s, 17);
    const auto t = turnout_bin_table(e.dataset, 0.01);
    double leader_hi = 0, leader_lo = 0, others_hi = 0, others_lo = 0;
    for (std::size_t b = 0; b < t.bin_count; ++b) {
      for (std::size_t p = 0; p < t.roster.size(); ++p) {
        const auto v = static_cast<double>(t.votes[b][p]);
        const bool hi = b >= 60;
        if (p == t.leader) (hi ? leader_hi : leader_lo) += v;
        else (hi ? others_hi : others_lo) += v;
      }
    }
    REQUIRE(others_hi > 0);
    CHECK(leader_hi / others_hi >= 3.0 * (leader_lo / others_lo));
  }
}
