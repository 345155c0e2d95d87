// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qshare/approx/losses.hpp"
#include "qshare/approx/policy.hpp"
#include "qshare/approx/trainer.hpp"
#include "qshare/harness/aggregate.hpp"
#include "qshare/harness/csv.hpp"
#include "qshare/harness/experiment.hpp"
#include "qshare/harness/mann_whitney.hpp"
#include "qshare/harness/svg_plot.hpp"
#include "qshare/tabular/episode.hpp"
#include "support/gradient_check.hpp"
#include "support/value_iteration.hpp"

using namespace qshare;
namespace fs = std::filesystem;
using harness::Algorithm;

namespace {

constexpr int kRuns = 50;
constexpr std::uint64_t kMasterSeed = 12345;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Tabular suites are shared between criteria, so each (algorithm, n, episodes)
// is run once.
class TabularResults {
 public:
  const harness::AggregateReport& report(Algorithm algo, int n, int episodes) {
    return entry(algo, n, episodes).report;
  }
  const std::vector<RunMetrics>& runs(Algorithm algo, int n, int episodes) { return entry(algo, n, episodes).runs; }

 private:
  struct Entry {
    std::vector<RunMetrics> runs;
    harness::AggregateReport report;
  };

  Entry& entry(Algorithm algo, int n, int episodes) {
    const auto key = std::make_tuple(static_cast<int>(algo), n, episodes);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    harness::ExperimentConfig cfg;
    cfg.algorithm = algo;
    cfg.tier = harness::Tier::Tabular;
    cfg.chain_n = n;
    cfg.episodes = episodes;
    cfg.runs = kRuns;
    cfg.master_seed = kMasterSeed + static_cast<std::uint64_t>(n);
    Entry e;
    e.runs = harness::run_suite(cfg);
    e.report = harness::aggregate(e.runs, n);
    return cache_.emplace(key, std::move(e)).first->second;
  }

  std::map<std::tuple<int, int, int>, Entry> cache_;
};

Outcome convergence_ladder(TabularResults& results) {
  const double s40 = results.report(Algorithm::Shared, 40, 150).convergence_rate();
  const double s50 = results.report(Algorithm::Shared, 50, 300).convergence_rate();
  const double q50 = results.report(Algorithm::QLearn, 50, 300).convergence_rate();
  const bool pass = s40 >= 0.8 && s50 >= 0.8 && (1.0 - q50) >= 0.8;
  return {pass, fmt("shared converged n=40/150 %.2f, n=50/300 %.2f; q-learning failed n=50/300 %.2f", s40, s50,
                    1.0 - q50)};
}

Outcome goal_ordering(TabularResults& results) {
  bool pass = true;
  std::string detail;
  for (auto [n, episodes] : {std::pair{50, 300}, std::pair{70, 1500}}) {
    const double s = results.report(Algorithm::Shared, n, episodes).mean_goal_visits;
    const double h = results.report(Algorithm::RandomHead, n, episodes).mean_goal_visits;
    const double b = results.report(Algorithm::Bootstrap, n, episodes).mean_goal_visits;
    const auto test =
        harness::compare(results.runs(Algorithm::Shared, n, episodes), results.runs(Algorithm::Bootstrap, n, episodes));
    pass = pass && s > h && h > b && test.p_value < 0.05;
    detail += fmt("%sn=%d: shared %.2f, random-head %.2f, bootstrap %.2f, p=%.4g", detail.empty() ? "" : "; ", n, s,
                  h, b, test.p_value);
  }
  return {pass, detail};
}

Outcome earlier_convergence(TabularResults& results) {
  bool pass = true;
  std::string detail;
  for (auto [n, episodes] : {std::pair{40, 150}, std::pair{45, 200}, std::pair{50, 300}}) {
    const double s = results.report(Algorithm::Shared, n, episodes).mean_first_optimal_episode();
    const double b = results.report(Algorithm::Bootstrap, n, episodes).mean_first_optimal_episode();
    pass = pass && s < b;
    detail += fmt("%sn=%d: shared %.1f vs bootstrap %.1f", detail.empty() ? "" : "; ", n, s, b);
  }
  return {pass, detail};
}

Outcome oracle_equivalence() {
  const envs::ChainSpec spec = envs::ChainSpec::with_states(10);
  tabular::AgentConfig cfg;
  cfg.alpha = 0.1;
  cfg.gamma = 0.99;
  cfg.epsilon = 0.3;
  cfg.seed = kMasterSeed;
  tabular::QLearningAgent agent(spec.n, cfg);
  envs::ChainEnv env(spec);
  for (int e = 0; e < 5000; ++e) tabular::run_episode(agent, env);

  const auto exact = testing::value_iteration(spec, cfg.gamma);
  bool policy_match = true;
  double worst = 0.0;
  for (int s = 2; s < spec.n; ++s) {
    const auto& row = exact[static_cast<std::size_t>(s - 1)];
    const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    policy_match = policy_match && envs::to_index(agent.table().argmax(envs::State{s})) == static_cast<int>(best);
    for (envs::Action a : envs::kAllActions) {
      worst = std::max(worst, std::abs(agent.table().at(envs::State{s}, a) - row[static_cast<std::size_t>(envs::to_index(a))]));
    }
  }
  return {policy_match && worst <= 1e-2,
          fmt("greedy policy %s, max |Q - Q*| over s2..s9 = %.3g", policy_match ? "matches" : "differs", worst)};
}

Outcome gradient_suite() {
  constexpr int kConfigs = 25;
  Rng rng(kMasterSeed);
  std::map<std::string, int> passed;
  double worst = 0.0;
  for (int i = 0; i < kConfigs; ++i) {
    auto single = testing::random_tiny_problem(rng, 1);
    auto multi = testing::random_tiny_problem(rng, 4);
    const int advisor = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(multi.net.heads())));
    const std::vector<std::pair<std::string, testing::GradientReport>> reports = {
        {"dqn", testing::check_gradients(single.net, [&](const approx::MultiHeadNet& n) {
           return approx::dqn_loss(n, single.batch, single.gamma);
         })},
        {"ddqn", testing::check_gradients(single.net, [&](const approx::MultiHeadNet& n) {
           return approx::ddqn_loss(n, single.batch, single.gamma);
         })},
        {"bootstrapped", testing::check_gradients(multi.net, [&](const approx::MultiHeadNet& n) {
           return approx::bootstrapped_loss(n, multi.batch, multi.gamma);
         })},
        {"shared", testing::check_gradients(multi.net, [&](const approx::MultiHeadNet& n) {
           return approx::shared_loss(n, multi.batch, multi.gamma, advisor);
         })},
    };
    for (const auto& [name, report] : reports) {
      passed[name] += report.ok() ? 1 : 0;
      worst = std::max(worst, report.worst_relative);
      if (!report.ok()) std::printf("  %s config %d: %s\n", name.c_str(), i, report.first_failure.c_str());
    }
  }
  bool pass = true;
  std::string detail;
  for (const auto& [name, count] : passed) {
    pass = pass && count == kConfigs;
    detail += fmt("%s %d/%d, ", name.c_str(), count, kConfigs);
  }
  return {pass, detail + fmt("worst relative error %.2g", worst)};
}

bool same_loss(const approx::LossResult& a, const approx::LossResult& b) {
  return a.loss == b.loss && a.grad.values == b.grad.values && a.grad.trunk_scale == b.grad.trunk_scale;
}

Outcome degeneracy_suite() {
  constexpr int kConfigs = 25;
  Rng rng(kMasterSeed + 1);
  int own = 0, single = 0, synced = 0;
  for (int i = 0; i < kConfigs; ++i) {
    auto multi = testing::random_tiny_problem(rng, 5);
    std::vector<int> self(static_cast<std::size_t>(multi.net.heads()));
    for (std::size_t k = 0; k < self.size(); ++k) self[k] = static_cast<int>(k);
    own += same_loss(approx::shared_loss(multi.net, multi.batch, multi.gamma, self),
                     approx::bootstrapped_loss(multi.net, multi.batch, multi.gamma));

    auto one = testing::random_tiny_problem(rng, 1);
    single += same_loss(approx::bootstrapped_loss(one.net, one.batch, one.gamma),
                        approx::ddqn_loss(one.net, one.batch, one.gamma));
    one.net.sync_target();
    synced += same_loss(approx::ddqn_loss(one.net, one.batch, one.gamma),
                        approx::dqn_loss(one.net, one.batch, one.gamma));
  }

  int trajectories = 0;
  constexpr int kSeeds = 5;
  for (int s = 0; s < kSeeds; ++s) {
    approx::TrainConfig cfg;
    cfg.heads = 1;
    cfg.total_steps = 5000;
    cfg.seed = derive_seed(kMasterSeed, static_cast<std::uint64_t>(s));
    envs::ChainEnv a(envs::ChainSpec::with_states(10)), b(envs::ChainSpec::with_states(10));
    const auto shared = approx::train(approx::AgentKind::SharedBootstrapped, a, cfg);
    const auto boot = approx::train(approx::AgentKind::Bootstrapped, b, cfg);
    trajectories += shared.metrics == boot.metrics && shared.net.online() == boot.net.online() &&
                    shared.net.target() == boot.net.target();
  }
  const bool pass = own == kConfigs && single == kConfigs && synced == kConfigs && trajectories == kSeeds;
  return {pass, fmt("shared(own)=bootstrapped %d/%d, bootstrapped(K=1)=ddqn %d/%d, ddqn=dqn after sync %d/%d, "
                    "K=1 trajectories %d/%d",
                    own, kConfigs, single, kConfigs, synced, kConfigs, trajectories, kSeeds)};
}

Outcome deep_sanity() {
  constexpr int kSeeds = 10;
  std::string detail;
  bool pass = true;
  for (approx::AgentKind kind : {approx::AgentKind::DQN, approx::AgentKind::SharedBootstrapped}) {
    int solved = 0;
    for (int s = 0; s < kSeeds; ++s) {
      approx::TrainConfig cfg;
      cfg.heads = 10;
      cfg.total_steps = 50000;
      cfg.seed = derive_seed(kMasterSeed, static_cast<std::uint64_t>(s));
      envs::ChainEnv env(envs::ChainSpec::with_states(10));
      const auto result = approx::train(kind, env, cfg);
      Rng eval_rng(cfg.seed);
      const EpisodeRecord greedy = approx::evaluate_greedy(kind, result.net, env, eval_rng);
      solved += greedy.reached_goal && greedy.steps == 8;
    }
    pass = pass && solved >= 8;
    detail += fmt("%s%s %d/%d", detail.empty() ? "" : ", ", std::string(approx::to_string(kind)).c_str(), solved,
                  kSeeds);
  }
  return {pass, detail + " seeds reach the goal greedily in 8 steps"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs a suite into dir and writes the derived artifacts next to it.
void produce(harness::ExperimentConfig cfg, const fs::path& dir) {
  fs::create_directories(dir);
  cfg.out_dir = dir;
  const auto runs = harness::run_suite(cfg);
  std::vector<RunMetrics> trimmed = runs;
  std::size_t shortest = trimmed.front().episodes.size();
  for (const auto& r : trimmed) shortest = std::min(shortest, r.episodes.size());
  for (auto& r : trimmed) r.episodes.resize(shortest);
  const auto report = harness::aggregate(trimmed, cfg.chain_n);
  harness::emit_aggregate_csv(report, dir / "aggregate.csv");
  const std::vector<harness::NamedReport> named = {{std::string(harness::to_string(cfg.algorithm)), report}};
  harness::emit_plot(named, dir / "plot.svg");
}

Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "qshare_acceptance_repro";
  fs::remove_all(root);
  std::vector<harness::ExperimentConfig> suites;
  for (Algorithm algo : {Algorithm::QLearn, Algorithm::DoubleQ, Algorithm::Bootstrap, Algorithm::RandomHead,
                         Algorithm::Shared}) {
    harness::ExperimentConfig cfg;
    cfg.algorithm = algo;
    cfg.chain_n = 20;
    cfg.episodes = 60;
    cfg.runs = 4;
    cfg.master_seed = kMasterSeed;
    suites.push_back(cfg);
  }
  for (Algorithm algo : {Algorithm::Shared, Algorithm::SharedVote}) {
    harness::ExperimentConfig cfg;
    cfg.algorithm = algo;
    cfg.tier = harness::Tier::Approx;
    cfg.chain_n = 6;
    cfg.total_steps = 3000;
    cfg.runs = 2;
    cfg.master_seed = kMasterSeed;
    cfg.train.heads = 4;
    cfg.train.hidden = 16;
    suites.push_back(cfg);
  }
  int identical = 0, files = 0;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const fs::path a = root / ("a" + std::to_string(i)), b = root / ("b" + std::to_string(i));
    produce(suites[i], a);
    harness::ExperimentConfig again = suites[i];
    again.jobs = 2;  // scheduling must not matter either
    produce(again, b);
    for (const auto& entry : fs::directory_iterator(a)) {
      if (entry.path().filename() == "config.ini") continue;  // records the job count
      ++files;
      identical += slurp(entry.path()) == slurp(b / entry.path().filename());
    }
  }
  fs::remove_all(root);
  return {files > 0 && identical == files,
          fmt("%d/%d files byte-identical across %zu suites", identical, files, suites.size())};
}

}  // namespace

// Optional arguments select criteria by number; no arguments runs them all.
int main(int argc, char** argv) {
  std::vector<std::string> selected(argv + 1, argv + argc);
  TabularResults results;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 convergence ladder", [&] { return convergence_ladder(results); }},
      {"2 goal-visitation ordering", [&] { return goal_ordering(results); }},
      {"3 earlier first optimal episode", [&] { return earlier_convergence(results); }},
      {"4 value iteration oracle", oracle_equivalence},
      {"5 gradient checks", gradient_suite},
      {"6 degenerate cases", degeneracy_suite},
      {"7 deep tier sanity", deep_sanity},
      {"8 reproducibility", reproducibility},
  };
  int failures = 0, ran = 0;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), name.substr(0, name.find(' '))) == selected.end()) {
      continue;
    }
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += outcome.pass ? 0 : 1;
    std::printf("%s criterion %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
