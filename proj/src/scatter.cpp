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

#include "ef/scatter.hpp"

#include <algorithm>
#include <cmath>

#include "ef/error.hpp"

namespace ef {

std::string_view to_string(YMode mode) {
  return mode == YMode::kShareOfRegistered ? "share_of_registered" : "share_of_cast";
}

std::string_view to_string(Weighting weighting) {
  return weighting == Weighting::kUniform ? "uniform" : "by_registered";
}

std::vector<ScatterPoint> build_points(const ElectionDataset &dataset,
                                       std::string_view party, YMode mode) {
  const bool others = party == kOthersParty;
  std::size_t index = 0;
  if (!others) {
    const auto found = dataset.roster().index_of(party);
    if (!found) fail(ErrorCode::kUnknownParty, "unknown party '" + std::string(party) + "'");
    index = *found;
  }
  std::vector<ScatterPoint> points;
  points.reserve(dataset.size());
  for (const auto &r : dataset.records()) {
    Count votes = 0;
    if (others) {
      for (std::size_t p = 0; p < r.votes.size(); ++p) {
        if (p != dataset.leader()) votes += r.votes[p];
      }
    } else {
      votes = r.votes[index];
    }
    const auto registered = static_cast<double>(r.registered);
    ScatterPoint point;
    point.precinct_id = r.precinct_id;
    point.x = static_cast<double>(r.ballots_cast) / registered;
    if (mode == YMode::kShareOfRegistered) {
      point.y = static_cast<double>(votes) / registered;
    } else {
      point.y = r.ballots_cast > 0
                    ? static_cast<double>(votes) / static_cast<double>(r.ballots_cast)
                    : 0.0;
    }
    point.weight = registered;
    points.push_back(std::move(point));
  }
  return points;
}

TrendFit fit_trend(std::span<const ScatterPoint> points, Weighting weighting) {
  struct Xyw {
    double x, y, w;
  };
  std::vector<Xyw> data;
  data.reserve(points.size());
  for (const auto &p : points) {
    data.push_back({p.x, p.y, weighting == Weighting::kUniform ? 1.0 : p.weight});
  }
  std::sort(data.begin(), data.end(), [](const Xyw &a, const Xyw &b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.w < b.w;
  });
  if (data.size() < 2 || data.front().x == data.back().x) {
    fail(ErrorCode::kDegenerateX, "trend fit needs at least two distinct x values");
  }

  double sw = 0, sx = 0, sy = 0;
  for (const auto &d : data) {
    sw += d.w;
    sx += d.w * d.x;
    sy += d.w * d.y;
  }
  if (!(sw > 0)) fail(ErrorCode::kDegenerateX, "trend fit has zero total weight");
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (const auto &d : data) {
    sxx += d.w * (d.x - mx) * (d.x - mx);
    sxy += d.w * (d.x - mx) * (d.y - my);
  }
  if (!(sxx > 0)) fail(ErrorCode::kDegenerateX, "trend fit has zero x variance");

  TrendFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.point_count = data.size();
  double ssr = 0;
  for (const auto &d : data) {
    const double r = d.y - fit.intercept - fit.slope * d.x;
    ssr += d.w * r * r;
  }
  fit.residual_rms = std::sqrt(ssr / sw);
  // Classical OLS standard error; with weights the residual variance is
  // scaled by the mean weight so uniform and by_registered agree on units.
  const auto n = static_cast<double>(data.size());
  if (n > 2) {
    const double sigma2 = ssr / sw * n / (n - 2);
    fit.slope_stderr = std::sqrt(sigma2 / (sxx * n / sw));
  }
  return fit;
}

}  // namespace ef
