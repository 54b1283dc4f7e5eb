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

#ifndef EF_SVG_HPP_
#define EF_SVG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ef/histogram.hpp"
#include "ef/scatter.hpp"

namespace ef {

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct PlotSeries {
  enum class Kind { kPoints, kLine, kBars, kBand };
  Kind kind = Kind::kPoints;
  std::string label;
  std::string color = "#1f77b4";
  std::vector<PlotPoint> points;  // for kBand: the lower edge
  std::vector<PlotPoint> upper;   // kBand only, same x as `points`
  double bar_width = 0.008;       // kBars, in x units
};

struct PlotAxis {
  std::string label;
  double min = 0.0;
  double max = 1.0;
  bool percent = true;  // values are fractions, ticks printed as percent
};

struct PlotSpec {
  std::string title;
  PlotAxis x;
  PlotAxis y;
  std::vector<PlotSeries> series;
  int width = 720;
  int height = 480;
};

/// Standalone SVG 1.1. Output depends only on the PlotSpec. Throws EmptyPlot when
/// no series holds a point, BadArgument on non-finite coordinates or an empty
/// axis range.
std::string render_svg(const PlotSpec &spec);

struct ScatterLayer {
  std::string label;
  std::vector<ScatterPoint> points;
  std::optional<TrendFit> fit;
};

/// Turnout against share, both axes 0-100%.
PlotSpec scatter_plot(std::string title, std::string y_label,
                      const std::vector<ScatterLayer> &layers);

struct HistogramOverlay {
  std::vector<double> null_lo;  // per bin, same units as the histogram
  std::vector<double> null_hi;
  std::vector<double> null_mean;
  std::vector<int> flagged;
};

/// Bars at integer percent bins with an optional null envelope.
PlotSpec histogram_plot(std::string title, const IntegerPercentHistogram &histogram,
                        const std::optional<HistogramOverlay> &overlay = std::nullopt);

}  // namespace ef

#endif  // EF_SVG_HPP_
