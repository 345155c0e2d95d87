#include "qshare/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "qshare/harness/csv.hpp"
#include "qshare/tabular/episode.hpp"

namespace qshare::harness {

std::string_view to_string(Tier tier) { return tier == Tier::Tabular ? "tabular" : "approx"; }

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::QLearn: return "qlearn";
    case Algorithm::DoubleQ: return "doubleq";
    case Algorithm::Bootstrap: return "bootstrap";
    case Algorithm::RandomHead: return "randomhead";
    case Algorithm::Shared: return "shared";
    case Algorithm::Vote: return "vote";
    case Algorithm::SharedVote: return "sharedvote";
  }
  return "?";
}

Tier parse_tier(std::string_view name) {
  if (name == "tabular") return Tier::Tabular;
  if (name == "approx") return Tier::Approx;
  throw std::invalid_argument("unknown tier '" + std::string(name) + "'");
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::QLearn, Algorithm::DoubleQ, Algorithm::Bootstrap, Algorithm::RandomHead,
                      Algorithm::Shared, Algorithm::Vote, Algorithm::SharedVote}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

tabular::TabularAlgorithm tabular_algorithm(Algorithm algo) {
  switch (algo) {
    case Algorithm::QLearn: return tabular::TabularAlgorithm::QLearning;
    case Algorithm::DoubleQ: return tabular::TabularAlgorithm::DoubleQ;
    case Algorithm::Bootstrap: return tabular::TabularAlgorithm::Bootstrap;
    case Algorithm::RandomHead: return tabular::TabularAlgorithm::RandomHead;
    case Algorithm::Shared: return tabular::TabularAlgorithm::Shared;
    case Algorithm::Vote:
    case Algorithm::SharedVote: break;
  }
  throw std::invalid_argument("algorithm '" + std::string(to_string(algo)) + "' has no tabular variant");
}

approx::AgentKind approx_kind(Algorithm algo) {
  switch (algo) {
    case Algorithm::QLearn: return approx::AgentKind::DQN;
    case Algorithm::DoubleQ: return approx::AgentKind::DDQN;
    case Algorithm::Bootstrap: return approx::AgentKind::Bootstrapped;
    case Algorithm::RandomHead: return approx::AgentKind::RandomHeadBootstrapped;
    case Algorithm::Shared: return approx::AgentKind::SharedBootstrapped;
    case Algorithm::Vote: return approx::AgentKind::EnsembleVoting;
    case Algorithm::SharedVote: return approx::AgentKind::SharedEnsembleVoting;
  }
  throw std::invalid_argument("unknown algorithm");
}

envs::ChainSpec ExperimentConfig::chain_spec() const {
  envs::ChainSpec spec = envs::ChainSpec::with_states(chain_n);
  if (step_cap) spec.step_cap = *step_cap;
  return spec;
}

void ExperimentConfig::validate() const {
  chain_spec().validate();
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  if (tier == Tier::Tabular) {
    if (episodes < 0) throw std::invalid_argument("episodes must be non-negative");
    tabular_algorithm(algorithm);
    agent.validate();
  } else {
    if (total_steps < 0) throw std::invalid_argument("total steps must be non-negative");
    train.validate();
  }
}

std::uint64_t run_seed(std::uint64_t master_seed, int run) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(run));
}

RunFailure::RunFailure(int run, std::uint64_t seed, const std::string& what)
    : std::runtime_error("run " + std::to_string(run) + " (seed " + std::to_string(seed) + ") failed: " + what),
      run_(run),
      seed_(seed) {}

RunMetrics run_single(const ExperimentConfig& cfg, int run) {
  const std::uint64_t seed = run_seed(cfg.master_seed, run);
  try {
    envs::ChainEnv env(cfg.chain_spec());
    if (cfg.tier == Tier::Approx) {
      approx::TrainConfig train = cfg.train;
      train.seed = seed;
      train.total_steps = cfg.total_steps;
      RunMetrics metrics = approx::train(approx_kind(cfg.algorithm), env, train).metrics;
      metrics.run = run;
      return metrics;
    }
    tabular::AgentConfig agent_cfg = cfg.agent;
    agent_cfg.seed = seed;
    auto agent = tabular::make_agent(tabular_algorithm(cfg.algorithm), cfg.chain_n, agent_cfg);
    RunMetrics metrics;
    metrics.run = run;
    metrics.episodes.reserve(static_cast<std::size_t>(cfg.episodes));
    for (int e = 0; e < cfg.episodes; ++e) {
      const tabular::EpisodeStats stats = tabular::run_episode(*agent, env);
      metrics.episodes.push_back(EpisodeRecord{e, stats.steps, stats.total_reward, stats.reached_goal});
    }
    return metrics;
  } catch (const std::exception& e) {
    throw RunFailure(run, seed, e.what());
  }
}

std::vector<RunMetrics> run_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_config(cfg, cfg.out_dir / "config.ini");
  }

  std::vector<RunMetrics> results(static_cast<std::size_t>(cfg.runs));
  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::optional<RunFailure> failure;

  auto worker = [&] {
    for (int run = next++; run < cfg.runs; run = next++) {
      try {
        results[static_cast<std::size_t>(run)] = run_single(cfg, run);
        if (!cfg.out_dir.empty()) {
          emit_csv(results[static_cast<std::size_t>(run)], cfg.out_dir / ("run_" + std::to_string(run) + ".csv"));
        }
      } catch (const RunFailure& f) {
        std::lock_guard lock(failure_mutex);
        if (!failure || f.run() < failure->run()) failure = f;
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure || run < failure->run()) failure = RunFailure(run, run_seed(cfg.master_seed, run), e.what());
      }
    }
  };

  const int workers = std::min(cfg.jobs, cfg.runs);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) throw *failure;
  return results;
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "algo = " << to_string(cfg.algorithm) << '\n'
      << "tier = " << to_string(cfg.tier) << '\n'
      << "n-states = " << cfg.chain_n << '\n'
      << "step-cap = " << cfg.chain_spec().step_cap << '\n'
      << "runs = " << cfg.runs << '\n'
      << "seed = " << cfg.master_seed << '\n';
  if (cfg.tier == Tier::Tabular) {
    out << "episodes = " << cfg.episodes << '\n'
        << "heads = " << cfg.agent.heads << '\n'
        << "alpha = " << format_number(cfg.agent.alpha) << '\n'
        << "gamma = " << format_number(cfg.agent.gamma) << '\n'
        << "epsilon = " << format_number(cfg.agent.epsilon) << '\n'
        << "select-best-int = " << cfg.agent.select_best_int << '\n'
        << "init-low = " << format_number(cfg.agent.init_low) << '\n'
        << "init-high = " << format_number(cfg.agent.init_high) << '\n'
        << "mask-prob = " << format_number(cfg.agent.mask_prob) << '\n';
  } else {
    const auto& t = cfg.train;
    out << "total-steps = " << cfg.total_steps << '\n'
        << "heads = " << t.heads << '\n'
        << "gamma = " << format_number(t.gamma) << '\n'
        << "select-best-int = " << t.select_best_int << '\n'
        << "hidden = " << t.hidden << '\n'
        << "batch-size = " << t.batch_size << '\n'
        << "learning-rate = " << format_number(t.learning_rate) << '\n'
        << "target-sync = " << t.target_sync_interval << '\n'
        << "train-interval = " << t.train_interval << '\n'
        << "buffer = " << t.buffer_capacity << '\n'
        << "epsilon-start = " << format_number(t.epsilon_start) << '\n'
        << "epsilon-end = " << format_number(t.epsilon_end) << '\n'
        << "epsilon-decay = " << t.epsilon_decay_steps << '\n'
        << "mask-prob = " << format_number(t.mask_prob) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

RunDirectory load_run_directory(const std::filesystem::path& dir) {
  RunDirectory out;
  out.config = read_key_values(dir / "config.ini");
  const auto n = out.config.find("n-states");
  if (n == out.config.end()) throw std::runtime_error(dir.string() + "/config.ini has no n-states entry");
  try {
    out.chain_n = std::stoi(n->second);
  } catch (const std::exception&) {
    throw std::runtime_error("bad n-states value '" + n->second + "' in " + dir.string());
  }
  const auto algo = out.config.find("algo");
  out.label = algo != out.config.end() ? algo->second : dir.filename().string();

  std::vector<std::pair<int, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (!name.starts_with("run_") || !name.ends_with(".csv")) continue;
    const std::string digits = name.substr(4, name.size() - 8);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    files.emplace_back(std::stoi(digits), entry.path());
  }
  if (files.empty()) throw std::runtime_error("no run_<i>.csv files in " + dir.string());
  std::sort(files.begin(), files.end());
  out.runs.reserve(files.size());
  for (const auto& [index, path] : files) out.runs.push_back(read_csv(path));
  return out;
}

}  // namespace qshare::harness
