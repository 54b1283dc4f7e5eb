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

#include "ef/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ef/error.hpp"

namespace ef {

namespace {

constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

const char *const kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed two-decimal coordinates; "-0.00" prints as "0.00".
std::string num(double v) {
  auto s = fmt::format("{:.2f}", v);
  if (s == "-0.00") s = "0.00";
  return s;
}

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string tick_label(double v, bool percent) {
  if (percent) v *= 100.0;
  if (std::abs(v - std::round(v)) < 1e-9) return fmt::format("{}{}", std::llround(v), percent ? "%" : "");
  return fmt::format("{:.1f}{}", v, percent ? "%" : "");
}

}  // namespace

std::string render_svg(const PlotSpec &spec) {
  bool any = false;
  for (const auto &s : spec.series) {
    for (const auto &p : s.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        fail(ErrorCode::kBadArgument, "plot coordinates must be finite");
      }
    }
    for (const auto &p : s.upper) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        fail(ErrorCode::kBadArgument, "plot coordinates must be finite");
      }
    }
    any = any || !s.points.empty();
  }
  if (!any) fail(ErrorCode::kEmptyPlot, "nothing to plot");
  if (!(spec.x.max > spec.x.min) || !(spec.y.max > spec.y.min) || spec.width < 200 ||
      spec.height < 150) {
    fail(ErrorCode::kBadArgument, "plot axes need max > min and a canvas of at least 200x150");
  }

  const double w = spec.width, h = spec.height;
  const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
  const auto sx = [&](double x) { return kLeft + (x - spec.x.min) / (spec.x.max - spec.x.min) * pw; };
  const auto sy = [&](double y) { return kTop + ph - (y - spec.y.min) / (spec.y.max - spec.y.min) * ph; };
  const auto cy = [&](double y) { return std::clamp(y, spec.y.min, spec.y.max); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\">\n",
      spec.width, spec.height, spec.width, spec.height);
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += fmt::format(
      "<text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
      "text-anchor=\"middle\">{}</text>\n",
      num(w / 2), escape(spec.title));

  // Grid and ticks.
  out += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  const auto axis_ticks = [&](const PlotAxis &axis, bool horizontal) {
    const double step = nice_step(axis.max - axis.min);
    const double first = std::ceil(axis.min / step - 1e-9) * step;
    for (int i = 0;; ++i) {
      const double v = first + i * step;
      if (v > axis.max + step * 1e-9) break;
      if (horizontal) {
        const double x = sx(v);
        out += fmt::format(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#e0e0e0\"/>\n"
            "<text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
            num(x), num(kTop), num(kTop + ph), num(kTop + ph + 16), tick_label(v, axis.percent));
      } else {
        const double y = sy(v);
        out += fmt::format(
            "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#e0e0e0\"/>\n"
            "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5}</text>\n",
            num(y), num(kLeft), num(kLeft + pw), num(kLeft - 6), num(y + 4),
            tick_label(v, axis.percent));
      }
    }
  };
  axis_ticks(spec.x, true);
  axis_ticks(spec.y, false);
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\"/>\n",
      num(kLeft), num(kTop), num(pw), num(ph));
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     num(kLeft + pw / 2), num(h - 12), escape(spec.x.label));
  out += fmt::format(
      "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
      num(kTop + ph / 2), escape(spec.y.label));
  out += "</g>\n";

  out += fmt::format("<clipPath id=\"plot\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath>\n",
                     num(kLeft), num(kTop), num(pw), num(ph));
  out += "<g clip-path=\"url(#plot)\">\n";
  for (const auto &s : spec.series) {
    const auto color = escape(s.color);
    switch (s.kind) {
      case PlotSeries::Kind::kBand: {
        if (s.points.empty() || s.upper.size() != s.points.size()) break;
        std::string path;
        for (const auto &p : s.upper) path += num(sx(p.x)) + "," + num(sy(cy(p.y))) + " ";
        for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
          path += num(sx(it->x)) + "," + num(sy(cy(it->y))) + " ";
        }
        path.pop_back();
        out += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.25\" stroke=\"none\"/>\n",
                           path, color);
        break;
      }
      case PlotSeries::Kind::kBars: {
        const double half = s.bar_width / 2;
        for (const auto &p : s.points) {
          const double top = sy(cy(p.y));
          const double base = sy(cy(std::max(0.0, spec.y.min)));
          out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                             num(sx(p.x - half)), num(std::min(top, base)),
                             num(sx(p.x + half) - sx(p.x - half)), num(std::abs(base - top)), color);
        }
        break;
      }
      case PlotSeries::Kind::kLine: {
        std::string path;
        for (const auto &p : s.points) path += num(sx(p.x)) + "," + num(sy(p.y)) + " ";
        if (!path.empty()) path.pop_back();
        out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           path, color);
        break;
      }
      case PlotSeries::Kind::kPoints: {
        out += fmt::format("<g fill=\"{}\" fill-opacity=\"0.5\">\n", color);
        for (const auto &p : s.points) {
          out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"1.6\"/>\n", num(sx(p.x)), num(sy(p.y)));
        }
        out += "</g>\n";
        break;
      }
    }
  }
  out += "</g>\n";

  // Legend.
  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  double ly = kTop + 14;
  for (const auto &s : spec.series) {
    if (s.label.empty()) continue;
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n"
        "<text x=\"{}\" y=\"{}\">{}</text>\n",
        num(kLeft + pw - 150), num(ly - 9), escape(s.color), num(kLeft + pw - 135), num(ly),
        escape(s.label));
    ly += 15;
  }
  out += "</g>\n</svg>\n";
  return out;
}

PlotSpec scatter_plot(std::string title, std::string y_label,
                      const std::vector<ScatterLayer> &layers) {
  PlotSpec spec;
  spec.title = std::move(title);
  spec.x = {"turnout", 0.0, 1.0, true};
  spec.y = {std::move(y_label), 0.0, 1.0, true};
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto &layer = layers[i];
    const std::string color = kPalette[i % std::size(kPalette)];
    PlotSeries points{PlotSeries::Kind::kPoints, layer.label, color, {}, {}, 0.0};
    double lo = 1.0, hi = 0.0;
    for (const auto &p : layer.points) {
      points.points.push_back({p.x, p.y});
      lo = std::min(lo, p.x);
      hi = std::max(hi, p.x);
    }
    spec.series.push_back(std::move(points));
    if (layer.fit && lo <= hi) {
      PlotSeries line{PlotSeries::Kind::kLine, {}, color, {}, {}, 0.0};
      line.points = {{lo, layer.fit->intercept + layer.fit->slope * lo},
                     {hi, layer.fit->intercept + layer.fit->slope * hi}};
      spec.series.push_back(std::move(line));
    }
  }
  return spec;
}

PlotSpec histogram_plot(std::string title, const IntegerPercentHistogram &histogram,
                        const std::optional<HistogramOverlay> &overlay) {
  PlotSpec spec;
  spec.title = std::move(title);
  spec.x = {histogram.label, 0.0, 1.0, true};
  double top = 0.0;
  PlotSeries bars{PlotSeries::Kind::kBars, "observed", "#1f77b4", {}, {}, 0.008};
  for (int b = 0; b < kPercentBins; ++b) {
    const auto v = static_cast<double>(histogram.bins[static_cast<std::size_t>(b)]);
    bars.points.push_back({b / 100.0, v});
    top = std::max(top, v);
  }
  if (histogram.total() == 0) bars.points.clear();
  if (overlay && overlay->null_lo.size() == kPercentBins && overlay->null_hi.size() == kPercentBins) {
    PlotSeries band{PlotSeries::Kind::kBand, "null 99% band", "#ff7f0e", {}, {}, 0.0};
    for (int b = 0; b < kPercentBins; ++b) {
      band.points.push_back({b / 100.0, overlay->null_lo[static_cast<std::size_t>(b)]});
      band.upper.push_back({b / 100.0, overlay->null_hi[static_cast<std::size_t>(b)]});
      top = std::max(top, overlay->null_hi[static_cast<std::size_t>(b)]);
    }
    spec.series.push_back(std::move(band));
  }
  spec.series.push_back(std::move(bars));
  if (overlay && overlay->null_mean.size() == kPercentBins) {
    PlotSeries mean{PlotSeries::Kind::kLine, "null mean", "#ff7f0e", {}, {}, 0.0};
    for (int b = 0; b < kPercentBins; ++b) {
      mean.points.push_back({b / 100.0, overlay->null_mean[static_cast<std::size_t>(b)]});
    }
    spec.series.push_back(std::move(mean));
  }
  if (overlay && !overlay->flagged.empty()) {
    PlotSeries flags{PlotSeries::Kind::kBars, "flagged", "#d62728", {}, {}, 0.008};
    for (int t : overlay->flagged) {
      if (t >= 0 && t < kPercentBins) {
        flags.points.push_back({t / 100.0, static_cast<double>(histogram.bins[static_cast<std::size_t>(t)])});
      }
    }
    spec.series.push_back(std::move(flags));
  }
  spec.y = {std::string(to_string(histogram.weight_mode)), 0.0, top > 0.0 ? top * 1.05 : 1.0, false};
  return spec;
}

}  // namespace ef
