#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bolab/cli.hpp"

namespace bolab::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 90, kRight = 600, kTop = 40, kBottom = 420;

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct LogAxis {
  double lo, hi;  // decades

  static LogAxis spanning(const std::vector<double>& values) {
    double mn = HUGE_VAL, mx = -HUGE_VAL;
    for (double v : values) {
      mn = std::min(mn, std::log10(v));
      mx = std::max(mx, std::log10(v));
    }
    LogAxis a{std::floor(mn), std::ceil(mx)};
    if (a.hi <= a.lo) a.hi = a.lo + 1;
    return a;
  }
  double frac(double v) const { return (std::log10(v) - lo) / (hi - lo); }
};

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

}  // namespace

std::string sweep_svg(const std::vector<SweepRow>& rows, std::vector<std::string>& warnings) {
  Series hhalf{"sup_hhalf_err", "#1f77b4", {}};
  Series drift{"energy_drift", "#d62728", {}};
  for (const auto& r : rows) {
    if (!(r.epsilon > 0)) {
      warnings.push_back("skipping row with non-positive epsilon");
      continue;
    }
    if (r.sup_hhalf_err > 0)
      hhalf.points.emplace_back(r.epsilon, r.sup_hhalf_err);
    else
      warnings.push_back("sup_hhalf_err <= 0 at epsilon " + format_number(r.epsilon) + " not plotted");
    if (r.energy_drift > 0)
      drift.points.emplace_back(r.epsilon, r.energy_drift);
    else
      warnings.push_back("energy_drift <= 0 at epsilon " + format_number(r.epsilon) + " not plotted");
  }

  std::vector<double> xs, ys;
  for (const Series* s : {&hhalf, &drift})
    for (const auto& [x, y] : s->points) {
      xs.push_back(x);
      ys.push_back(y);
    }
  if (xs.empty()) throw ConfigError("csv", "no positive values to plot");
  const LogAxis xa = LogAxis::spanning(xs), ya = LogAxis::spanning(ys);
  auto px = [&](double x) { return kLeft + xa.frac(x) * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - ya.frac(y) * (kBottom - kTop); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";

  for (double d = xa.lo; d <= xa.hi; d += 1) {
    const double x = px(std::pow(10.0, d));
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << kBottom << "\" x2=\"" << fixed(x)
        << "\" y2=\"" << kBottom + 6 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(x) << "\" y=\"" << kBottom + 22
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
  }
  for (double d = ya.lo; d <= ya.hi; d += 1) {
    const double y = py(std::pow(10.0, d));
    svg << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << fixed(y) << "\" x2=\"" << kLeft
        << "\" y2=\"" << fixed(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 10 << "\" y=\"" << fixed(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 20
      << "\" font-size=\"14\" text-anchor=\"middle\">epsilon</text>\n";
  svg << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (kTop + kBottom) / 2 << ")\">error / drift</text>\n";

  int legend_row = 0;
  for (const Series* s : {&hhalf, &drift}) {
    for (const auto& [x, y] : s->points)
      svg << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y))
          << "\" r=\"4\" fill=\"" << s->color << "\"/>\n";

    const double ly = kTop + 16 + 18 * legend_row++;
    svg << "<text x=\"" << kLeft + 12 << "\" y=\"" << fixed(ly) << "\" font-size=\"12\" fill=\""
        << s->color << "\">" << s->name << "</text>\n";

    if (s->points.size() < 3) {
      warnings.push_back(s->name + ": fewer than 3 points, no fit line");
      continue;
    }
    const RateFit fit = fit_rate(s->points);
    double x_lo = HUGE_VAL, x_hi = 0;
    for (const auto& p : s->points) {
      x_lo = std::min(x_lo, p.first);
      x_hi = std::max(x_hi, p.first);
    }
    auto fit_y = [&](double x) { return std::exp(fit.intercept + fit.slope * std::log(x)); };
    svg << "<polyline class=\"fit\" fill=\"none\" stroke=\"" << s->color
        << "\" stroke-dasharray=\"6 3\" points=\"" << fixed(px(x_lo)) << ',' << fixed(py(fit_y(x_lo)))
        << ' ' << fixed(px(x_hi)) << ',' << fixed(py(fit_y(x_hi))) << "\"/>\n";
    svg << "<text class=\"slope\" x=\"" << fixed(px(x_hi)) << "\" y=\""
        << fixed(py(fit_y(x_hi)) - 8) << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << s->color
        << "\">slope " << fixed(fit.slope, 3) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace bolab::cli
