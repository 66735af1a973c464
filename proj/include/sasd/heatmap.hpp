#pragma once

#include <string>
#include <vector>

#include "sasd/metrics.hpp"

namespace sasd {

enum class HeatmapMetric { FailureRate, MeanSuccessError };

/// Accepts "failure_rate" or "mean_success_error"; throws naming both on
/// anything else.
HeatmapMetric heatmapMetricFromName(const std::string& name);

/// Render sweep results as one shaded grid per method (rows = theta,
/// columns = N), all panels on a shared linear scale where darker = lower.
/// Cells without a finite value (a cell with no successful trials, for the
/// mean-success-error metric) stay white and are marked n/a. A degenerate
/// all-equal range renders a single-value legend instead of a gradient bar.
std::string renderHeatmapSvg(const std::vector<TrialRecord>& records,
                             HeatmapMetric metric);

/// CSV-in, SVG-out convenience wrapper. Throws on an empty CSV.
void renderHeatmapFile(const std::string& csvPath, HeatmapMetric metric,
                       const std::string& outSvg);

}  // namespace sasd
