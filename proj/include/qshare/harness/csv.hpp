#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qshare/metrics.hpp"

namespace qshare::harness {

struct AggregateReport;

inline constexpr std::string_view kRunCsvHeader = "run,episode,steps,total_reward,reached_goal";
inline constexpr std::string_view kAggregateCsvHeader = "episode,mean_steps,std_steps";

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Writes one run as `run,episode,steps,total_reward,reached_goal` rows.
/// Throws std::runtime_error on I/O failure.
void emit_csv(const RunMetrics& metrics, const std::filesystem::path& path);

/// Inverse of emit_csv. Throws std::runtime_error on a malformed file.
RunMetrics read_csv(const std::filesystem::path& path);

void emit_aggregate_csv(const AggregateReport& report, const std::filesystem::path& path);

}  // namespace qshare::harness
