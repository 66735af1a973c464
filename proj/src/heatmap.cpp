#include "sasd/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sasd/serialize.hpp"

namespace sasd {

namespace {

std::string fmtG(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Cell {
  int successCount = 0;
  int trialCount = 0;
  double successErrorSum = 0;
};

}  // namespace

HeatmapMetric heatmapMetricFromName(const std::string& name) {
  if (name == "failure_rate") return HeatmapMetric::FailureRate;
  if (name == "mean_success_error") return HeatmapMetric::MeanSuccessError;
  throw std::invalid_argument("unknown metric '" + name +
                              "'; valid metrics: failure_rate mean_success_error");
}

std::string renderHeatmapSvg(const std::vector<TrialRecord>& records,
                             HeatmapMetric metric) {
  if (records.empty()) throw std::runtime_error("heatmap: no records");

  std::vector<std::string> methods;
  std::vector<int> ns;
  std::vector<double> thetas;
  for (const TrialRecord& r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
    if (std::find(thetas.begin(), thetas.end(), r.theta) == thetas.end()) {
      thetas.push_back(r.theta);
    }
  }
  std::sort(ns.begin(), ns.end());
  std::sort(thetas.begin(), thetas.end());

  const std::size_t cols = ns.size();
  const std::size_t rows = thetas.size();
  auto nIndex = [&](int n) {
    return std::size_t(std::find(ns.begin(), ns.end(), n) - ns.begin());
  };
  auto thetaIndex = [&](double t) {
    return std::size_t(std::find(thetas.begin(), thetas.end(), t) - thetas.begin());
  };
  auto methodIndex = [&](const std::string& m) {
    return std::size_t(std::find(methods.begin(), methods.end(), m) -
                       methods.begin());
  };

  // aggregate per (method, theta row, N column)
  std::vector<Cell> cells(methods.size() * rows * cols);
  auto cellAt = [&](std::size_t mi, std::size_t ri, std::size_t ci) -> Cell& {
    return cells[(mi * rows + ri) * cols + ci];
  };
  for (const TrialRecord& r : records) {
    Cell& c = cellAt(methodIndex(r.method), thetaIndex(r.theta), nIndex(r.n));
    ++c.trialCount;
    if (r.success) {
      ++c.successCount;
      c.successErrorSum += r.eRec;
    }
  }

  auto cellValue = [&](const Cell& c) -> double {
    if (c.trialCount == 0) return std::numeric_limits<double>::quiet_NaN();
    if (metric == HeatmapMetric::FailureRate) {
      return double(c.trialCount - c.successCount) / double(c.trialCount);
    }
    if (c.successCount == 0) return std::numeric_limits<double>::quiet_NaN();
    return c.successErrorSum / double(c.successCount);
  };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Cell& c : cells) {
    const double v = cellValue(c);
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) {
    throw std::runtime_error("heatmap: no cell has a finite metric value");
  }
  const bool degenerate = !(hi > lo);

  auto shade = [&](double v) -> int {
    if (degenerate) return 128;
    const double t = (v - lo) / (hi - lo);  // 0 at the minimum: darkest
    return int(std::lround(t * 255.0));
  };

  const char* metricLabel = metric == HeatmapMetric::FailureRate
                                ? "failure rate"
                                : "mean success error";

  constexpr int kCell = 48;
  constexpr int kLeft = 78;    // theta labels
  constexpr int kTop = 34;     // panel title
  constexpr int kBottom = 52;  // N labels plus axis name
  constexpr int kGap = 28;     // between panels
  constexpr int kBarWidth = 96;

  const int panelW = kLeft + int(cols) * kCell + 10;
  const int panelH = kTop + int(rows) * kCell + kBottom;
  const int width = int(methods.size()) * (panelW + kGap) + kBarWidth;
  const int height = panelH + 20;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const int x0 = int(mi) * (panelW + kGap);
    svg << "<g class=\"panel\">\n";
    svg << "<text x=\"" << x0 + kLeft << "\" y=\"20\" font-size=\"15\">"
        << escapeXml(methods[mi]) << " (" << metricLabel << ")</text>\n";
    for (std::size_t ri = 0; ri < rows; ++ri) {
      const int y = kTop + int(ri) * kCell;
      svg << "<text x=\"" << x0 + kLeft - 6 << "\" y=\"" << y + kCell / 2 + 4
          << "\" font-size=\"12\" text-anchor=\"end\">" << fmtG(thetas[ri])
          << "</text>\n";
      for (std::size_t ci = 0; ci < cols; ++ci) {
        const int x = x0 + kLeft + int(ci) * kCell;
        const double v = cellValue(cellAt(mi, ri, ci));
        if (std::isfinite(v)) {
          const int g = shade(v);
          svg << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y
              << "\" width=\"" << kCell << "\" height=\"" << kCell
              << "\" fill=\"rgb(" << g << ',' << g << ',' << g
              << ")\" stroke=\"#888\"><title>" << fmtG(v) << "</title></rect>\n";
        } else {
          svg << "<rect class=\"cell na\" x=\"" << x << "\" y=\"" << y
              << "\" width=\"" << kCell << "\" height=\"" << kCell
              << "\" fill=\"white\" stroke=\"#888\"><title>n/a</title></rect>\n";
        }
      }
    }
    const int axisY = kTop + int(rows) * kCell;
    for (std::size_t ci = 0; ci < cols; ++ci) {
      svg << "<text x=\"" << x0 + kLeft + int(ci) * kCell + kCell / 2 << "\" y=\""
          << axisY + 18 << "\" font-size=\"12\" text-anchor=\"middle\">"
          << ns[ci] << "</text>\n";
    }
    svg << "<text x=\"" << x0 + kLeft + int(cols) * kCell / 2 << "\" y=\""
        << axisY + 38 << "\" font-size=\"13\" text-anchor=\"middle\">N</text>\n";
    svg << "<text x=\"" << x0 + 16 << "\" y=\"" << kTop + int(rows) * kCell / 2
        << "\" font-size=\"13\" transform=\"rotate(-90 " << x0 + 16 << ' '
        << kTop + int(rows) * kCell / 2 << ")\" text-anchor=\"middle\">theta</text>\n";
    svg << "</g>\n";
  }

  // legend: gradient bar (darker = lower), or the single value when flat
  const int barX = int(methods.size()) * (panelW + kGap) + 12;
  if (degenerate) {
    svg << "<g class=\"legend\">\n";
    svg << "<rect x=\"" << barX << "\" y=\"" << kTop
        << "\" width=\"18\" height=\"18\" fill=\"rgb(128,128,128)\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << barX + 24 << "\" y=\"" << kTop + 14
        << "\" font-size=\"12\">all cells " << fmtG(lo) << "</text>\n";
    svg << "</g>\n";
  } else {
    constexpr int kSlices = 64;
    const int barH = 3 * kCell;
    svg << "<g class=\"legend\">\n";
    for (int s = 0; s < kSlices; ++s) {
      // slice 0 at the bottom carries the minimum (darkest)
      const double frac = double(s) / double(kSlices - 1);
      const int g = int(std::lround(frac * 255.0));
      const int y = kTop + barH - (s + 1) * barH / kSlices;
      const int yNext = kTop + barH - s * barH / kSlices;
      svg << "<rect x=\"" << barX << "\" y=\"" << y << "\" width=\"18\" height=\""
          << yNext - y << "\" fill=\"rgb(" << g << ',' << g << ',' << g
          << ")\"/>\n";
    }
    svg << "<rect x=\"" << barX << "\" y=\"" << kTop << "\" width=\"18\" height=\""
        << barH << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << barX + 24 << "\" y=\"" << kTop + 10
        << "\" font-size=\"12\">" << fmtG(hi) << "</text>\n";
    svg << "<text x=\"" << barX + 24 << "\" y=\"" << kTop + barH
        << "\" font-size=\"12\">" << fmtG(lo) << "</text>\n";
    svg << "</g>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void renderHeatmapFile(const std::string& csvPath, HeatmapMetric metric,
                       const std::string& outSvg) {
  const std::vector<TrialRecord> records = readTrialCsv(csvPath);
  if (records.empty()) {
    throw std::runtime_error(csvPath + ": no data rows to render");
  }
  const std::string svg = renderHeatmapSvg(records, metric);
  std::ofstream out(outSvg);
  if (!out) throw std::runtime_error(outSvg + ": cannot open for writing");
  out << svg;
  if (!out) throw std::runtime_error(outSvg + ": write failed");
}

}  // namespace sasd
