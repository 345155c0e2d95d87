#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "qshare/harness/aggregate.hpp"

namespace qshare::harness {

struct NamedReport {
  std::string name;
  AggregateReport report;
};

enum class PlotMetric {
  /// Mean steps per episode with a +-1 std band.
  Steps,
  /// Mean cumulative goal visitations per episode.
  CumulativeGoals,
};

/// Renders the reports as a standalone SVG document.
std::string render_plot(std::span<const NamedReport> reports, PlotMetric metric = PlotMetric::Steps);

/// Writes render_plot() to path. Throws std::invalid_argument for an empty
/// report list and std::runtime_error on I/O failure.
void emit_plot(std::span<const NamedReport> reports, const std::filesystem::path& path,
               PlotMetric metric = PlotMetric::Steps);

}  // namespace qshare::harness
