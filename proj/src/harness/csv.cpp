#include "qshare/harness/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qshare/harness/aggregate.hpp"

namespace qshare::harness {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), end);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

template <typename T>
T parse_field(std::string_view text, const std::filesystem::path& path, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad field '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

void emit_csv(const RunMetrics& metrics, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << kRunCsvHeader << '\n';
  for (const auto& e : metrics.episodes) {
    out << metrics.run << ',' << e.episode << ',' << e.steps << ',' << format_number(e.total_reward) << ','
        << (e.reached_goal ? 1 : 0) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

RunMetrics read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRunCsvHeader) {
    throw std::runtime_error(path.string() + ": missing or unexpected header");
  }
  RunMetrics metrics;
  int line_no = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 5) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 5 fields");
    const int run = parse_field<int>(fields[0], path, line_no);
    if (first) {
      metrics.run = run;
      first = false;
    } else if (run != metrics.run) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": mixed run indices");
    }
    EpisodeRecord e;
    e.episode = parse_field<int>(fields[1], path, line_no);
    e.steps = parse_field<int>(fields[2], path, line_no);
    e.total_reward = parse_field<double>(fields[3], path, line_no);
    const int goal = parse_field<int>(fields[4], path, line_no);
    if (goal != 0 && goal != 1) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": reached_goal must be 0 or 1");
    e.reached_goal = goal == 1;
    metrics.episodes.push_back(e);
  }
  return metrics;
}

void emit_aggregate_csv(const AggregateReport& report, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << kAggregateCsvHeader << '\n';
  for (std::size_t i = 0; i < report.mean_steps.size(); ++i) {
    out << i << ',' << format_number(report.mean_steps[i]) << ',' << format_number(report.std_steps[i]) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace qshare::harness
