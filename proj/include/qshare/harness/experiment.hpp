#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qshare/approx/trainer.hpp"
#include "qshare/envs/chain.hpp"
#include "qshare/metrics.hpp"
#include "qshare/tabular/agents.hpp"

namespace qshare::harness {

enum class Tier { Tabular, Approx };

/// CLI-level algorithm names. The voting variants exist in the approx tier only.
enum class Algorithm { QLearn, DoubleQ, Bootstrap, RandomHead, Shared, Vote, SharedVote };

std::string_view to_string(Tier tier);
std::string_view to_string(Algorithm algo);
/// Throws std::invalid_argument on an unknown name.
Tier parse_tier(std::string_view name);
Algorithm parse_algorithm(std::string_view name);

tabular::TabularAlgorithm tabular_algorithm(Algorithm algo);
approx::AgentKind approx_kind(Algorithm algo);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Shared;
  Tier tier = Tier::Tabular;
  int chain_n = 40;
  /// Episodes per run (tabular tier).
  int episodes = 150;
  /// Environment steps per run (approx tier).
  std::int64_t total_steps = 50000;
  int runs = 50;
  std::uint64_t master_seed = 0;
  /// Per-episode cap; defaults to 100 * chain_n.
  std::optional<int> step_cap;
  tabular::AgentConfig agent;
  approx::TrainConfig train;
  /// Empty: keep results in memory only.
  std::filesystem::path out_dir;
  int jobs = 1;

  envs::ChainSpec chain_spec() const;
  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Seed of run `run`, derived from the master seed only.
std::uint64_t run_seed(std::uint64_t master_seed, int run);

/// A run that threw; carries what is needed to replay it.
class RunFailure : public std::runtime_error {
 public:
  RunFailure(int run, std::uint64_t seed, const std::string& what);
  int run() const { return run_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int run_;
  std::uint64_t seed_;
};

/// Executes one run of the experiment, fully determined by its derived seed.
RunMetrics run_single(const ExperimentConfig& cfg, int run);

/// Executes cfg.runs independent runs on cfg.jobs worker threads. When
/// out_dir is set, writes run_<i>.csv per run plus config.ini. Output does
/// not depend on the number of workers.
std::vector<RunMetrics> run_suite(const ExperimentConfig& cfg);

/// Flat `key = value` dump of the configuration, keyed by CLI flag names.
void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path);
/// Reads a flat `key = value` file; '#' and ';' start comments.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

/// Artifacts of a finished suite: config.ini plus run_<i>.csv files.
struct RunDirectory {
  std::map<std::string, std::string> config;
  std::vector<RunMetrics> runs;
  int chain_n = 0;
  /// The `algo` entry of config.ini, or the directory name.
  std::string label;
};

/// Loads runs in index order. Throws std::runtime_error when config.ini or
/// the run files are missing or unreadable.
RunDirectory load_run_directory(const std::filesystem::path& dir);

}  // namespace qshare::harness
