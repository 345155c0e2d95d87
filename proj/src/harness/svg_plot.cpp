#include "qshare/harness/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qshare::harness {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kLeft = 70;
constexpr double kRight = 180;
constexpr double kTop = 30;
constexpr double kBottom = 60;

struct Style {
  const char* color;
  const char* dash;
};

constexpr std::array<Style, 8> kStyles = {{
    {"#1f77b4", ""},
    {"#d62728", "6,3"},
    {"#2ca02c", "2,2"},
    {"#ff7f0e", "8,3,2,3"},
    {"#9467bd", ""},
    {"#8c564b", "6,3"},
    {"#e377c2", "2,2"},
    {"#17becf", "8,3,2,3"},
}};

std::string fmt(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return buf.data();
}

std::string escape(const std::string& text) {
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

// Rounds up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (v <= 0) return 1.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 5.0, 10.0}) {
    if (step * magnitude >= v) return step * magnitude;
  }
  return 10.0 * magnitude;
}

const std::vector<double>& series(const AggregateReport& r, PlotMetric metric) {
  return metric == PlotMetric::Steps ? r.mean_steps : r.mean_cumulative_goals;
}

}  // namespace

std::string render_plot(std::span<const NamedReport> reports, PlotMetric metric) {
  if (reports.empty()) throw std::invalid_argument("plot needs at least one report");

  std::size_t episodes = 1;
  double y_max = 0.0;
  for (const auto& nr : reports) {
    const auto& ys = series(nr.report, metric);
    episodes = std::max(episodes, ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double band = metric == PlotMetric::Steps ? nr.report.std_steps[i] : 0.0;
      y_max = std::max(y_max, ys[i] + band);
    }
  }
  y_max = nice_ceiling(y_max);
  const double x_span = static_cast<double>(std::max<std::size_t>(episodes - 1, 1));
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + plot_w * x / x_span; };
  auto py = [&](double y) { return kTop + plot_h * (1.0 - std::clamp(y, 0.0, y_max) / y_max); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  // Axes, ticks and labels.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\"" << fmt(kLeft + plot_w)
      << "\" y2=\"" << fmt(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
      << fmt(kTop + plot_h) << "\"/>\n"
      << "</g>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = x_span * i / kTicks;
    const double yv = y_max * i / kTicks;
    svg << "<line x1=\"" << fmt(px(xv)) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\"" << fmt(px(xv))
        << "\" y2=\"" << fmt(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << fmt(xv) << "</text>\n"
        << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(py(yv)) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
        << fmt(py(yv)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << fmt(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 15)
      << "\" text-anchor=\"middle\">Episode</text>\n"
      << "<text x=\"18\" y=\"" << fmt(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(kTop + plot_h / 2) << ")\">"
      << (metric == PlotMetric::Steps ? "Steps per episode" : "Cumulative goal visitations") << "</text>\n";

  for (std::size_t r = 0; r < reports.size(); ++r) {
    const Style& style = kStyles[r % kStyles.size()];
    const auto& report = reports[r].report;
    const auto& ys = series(report, metric);

    if (metric == PlotMetric::Steps && !ys.empty()) {
      svg << "<polygon class=\"band\" fill=\"" << style.color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < ys.size(); ++i) {
        svg << fmt(px(static_cast<double>(i))) << ',' << fmt(py(ys[i] + report.std_steps[i])) << ' ';
      }
      for (std::size_t i = ys.size(); i-- > 0;) {
        svg << fmt(px(static_cast<double>(i))) << ',' << fmt(py(ys[i] - report.std_steps[i])) << ' ';
      }
      svg << "\"/>\n";
    }

    svg << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << style.color << "\" stroke-width=\"1.5\"";
    if (*style.dash != '\0') svg << " stroke-dasharray=\"" << style.dash << "\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      svg << fmt(px(static_cast<double>(i))) << ',' << fmt(py(ys[i])) << ' ';
    }
    svg << "\"/>\n";

    const double ly = kTop + 10 + 20.0 * static_cast<double>(r);
    const double lx = kLeft + plot_w + 15;
    svg << "<g class=\"legend-entry\">"
        << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 25) << "\" y2=\"" << fmt(ly)
        << "\" stroke=\"" << style.color << "\" stroke-width=\"2\"";
    if (*style.dash != '\0') svg << " stroke-dasharray=\"" << style.dash << "\"";
    svg << "/><text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(reports[r].name)
        << "</text></g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(std::span<const NamedReport> reports, const std::filesystem::path& path, PlotMetric metric) {
  const std::string document = render_plot(reports, metric);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << document;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace qshare::harness
