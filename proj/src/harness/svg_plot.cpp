#include "dlambda/harness/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace dlambda::harness {

namespace {

constexpr double width = 720.0;
constexpr double height = 480.0;
constexpr double left = 80.0;
constexpr double right = 170.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

constexpr std::array<std::string_view, 6> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                                     "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(std::string_view s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

// 1-2-5 tick step giving roughly `target` intervals.
double tick_step(double span, int target)
{
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r <= 1.0) {
    return mag;
  }
  if (r <= 2.0) {
    return 2.0 * mag;
  }
  if (r <= 5.0) {
    return 5.0 * mag;
  }
  return 10.0 * mag;
}

struct Range
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v)
  {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void finish(bool pad_zero)
  {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (pad_zero && lo > 0.0) {
      lo = 0.0;
    }
    if (hi - lo < 1e-12) {
      hi = lo + 1.0;
    }
  }
};

} // namespace

std::string render_svg(const PlotSpec& plot)
{
  Range xr, yr;
  for (const PlotSeries& s : plot.series) {
    for (double x : s.x) {
      xr.add(x);
    }
    for (double y : s.y) {
      yr.add(y);
    }
  }
  xr.finish(false);
  yr.finish(true);
  const double x_step = tick_step(xr.hi - xr.lo, 8);
  const double y_step = tick_step(yr.hi - yr.lo, 6);
  yr.hi = std::ceil(yr.hi / y_step - 1e-9) * y_step;

  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string out;
  out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                     "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                     width, height, width, height);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  out += fmt::format("<text x=\"{:.2f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     left + pw / 2, escape(plot.title));

  // Grid and ticks.
  for (double x = std::ceil(xr.lo / x_step) * x_step; x <= xr.hi + 1e-9 * x_step; x += x_step) {
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                       "stroke=\"#e0e0e0\"/>\n",
                       px(x), top, top + ph);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n",
                       px(x), top + ph + 18, std::abs(x) < 1e-12 ? 0.0 : x);
  }
  for (double y = std::ceil(yr.lo / y_step) * y_step; y <= yr.hi + 1e-9 * y_step; y += y_step) {
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" "
                       "stroke=\"#e0e0e0\"/>\n",
                       left, left + pw, py(y));
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:g}</text>\n",
                       left - 6, py(y) + 4, std::abs(y) < 1e-12 ? 0.0 : y);
  }
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                     "stroke=\"black\"/>\n",
                     left, top, pw, ph);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, height - 18, escape(plot.x_label));
  out += fmt::format("<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                     "transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
                     top + ph / 2, escape(plot.y_label));

  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const PlotSeries& s = plot.series[i];
    // Up to four series are two channels drawn solid and dashed.
    const std::string_view colour =
      palette[plot.series.size() <= 4 ? i % 2 : i % palette.size()];
    std::string points;
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
        points += fmt::format("{:.2f},{:.2f} ", px(s.x[k]), py(s.y[k]));
      }
    }
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} "
                       "points=\"{}\"/>\n",
                       colour, s.dashed ? " stroke-dasharray=\"6 4\"" : "", points);
    const double ly = top + 16 + 18 * static_cast<double>(i);
    const double lx = left + pw + 12;
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
                       "stroke-width=\"1.5\"{}/>\n",
                       lx, ly, lx + 24, ly, colour, s.dashed ? " stroke-dasharray=\"6 4\"" : "");
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 30, ly + 4,
                       escape(s.label));
  }
  out += "</svg>\n";
  return out;
}

} // namespace dlambda::harness
