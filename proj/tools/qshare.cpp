// qshare: run, summarise and plot chain-MDP ensemble experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qshare/harness/aggregate.hpp"
#include "qshare/harness/csv.hpp"
#include "qshare/harness/experiment.hpp"
#include "qshare/harness/mann_whitney.hpp"
#include "qshare/harness/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace qshare;
using namespace qshare::harness;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentArgs {
  ExperimentConfig cfg;
  std::string algo = "shared";
  std::string tier = "tabular";
  int step_cap = 0;
  std::string out;

  ExperimentConfig resolve() const {
    ExperimentConfig c = cfg;
    try {
      c.algorithm = parse_algorithm(algo);
      c.tier = parse_tier(tier);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (step_cap > 0) c.step_cap = step_cap;
    c.out_dir = out;
    if (heads) c.agent.heads = c.train.heads = *heads;
    if (gamma) c.agent.gamma = c.train.gamma = *gamma;
    if (select_best_int) c.agent.select_best_int = c.train.select_best_int = *select_best_int;
    if (mask_prob) c.agent.mask_prob = c.train.mask_prob = *mask_prob;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    return c;
  }

  // Shared between both tiers; unset keeps each tier's own default.
  std::optional<int> heads;
  std::optional<double> gamma;
  std::optional<int> select_best_int;
  std::optional<double> mask_prob;
};

void add_experiment_options(CLI::App* app, ExperimentArgs& a) {
  ExperimentConfig& c = a.cfg;
  app->add_option("--algo", a.algo, "qlearn|doubleq|bootstrap|randomhead|shared (approx also: vote|sharedvote)")
      ->capture_default_str();
  app->add_option("--tier", a.tier, "tabular|approx")->capture_default_str();
  app->add_option("--n-states", c.chain_n, "chain length n")->capture_default_str();
  app->add_option("--episodes", c.episodes, "episodes per run (tabular)")->capture_default_str();
  app->add_option("--total-steps", c.total_steps, "environment steps per run (approx)")->capture_default_str();
  app->add_option("--runs", c.runs)->capture_default_str();
  app->add_option("--seed", c.master_seed, "master seed")->capture_default_str();
  app->add_option("--step-cap", a.step_cap, "per-episode step cap (default 100*n)");
  app->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  const tabular::AgentConfig tab_defaults;
  const approx::TrainConfig deep_defaults;
  auto per_tier = [](auto tab, auto deep) {
    std::ostringstream s;
    s << tab << " tabular, " << deep << " approx";
    return s.str();
  };
  app->add_option("--heads", a.heads, "ensemble size K")
      ->default_str(per_tier(tab_defaults.heads, deep_defaults.heads));
  app->add_option("--gamma", a.gamma, "discount")->default_str(per_tier(tab_defaults.gamma, deep_defaults.gamma));
  app->add_option("--select-best-int", a.select_best_int, "steps between advisor refreshes")
      ->default_str(per_tier(tab_defaults.select_best_int, deep_defaults.select_best_int));
  app->add_option("--mask-prob", a.mask_prob, "per-head Bernoulli mask probability")->default_str("1");

  auto* tab = "Tabular";
  app->add_option("--alpha", c.agent.alpha)->capture_default_str()->group(tab);
  app->add_option("--epsilon", c.agent.epsilon, "exploration rate of qlearn/doubleq")->capture_default_str()->group(tab);
  app->add_option("--init-low", c.agent.init_low, "ensemble table init lower bound")->capture_default_str()->group(tab);
  app->add_option("--init-high", c.agent.init_high)->capture_default_str()->group(tab);

  auto* deep = "Approx";
  app->add_option("--hidden", c.train.hidden)->capture_default_str()->group(deep);
  app->add_option("--batch-size", c.train.batch_size)->capture_default_str()->group(deep);
  app->add_option("--learning-rate", c.train.learning_rate)->capture_default_str()->group(deep);
  app->add_option("--target-sync", c.train.target_sync_interval)->capture_default_str()->group(deep);
  app->add_option("--train-interval", c.train.train_interval)->capture_default_str()->group(deep);
  app->add_option("--buffer", c.train.buffer_capacity)->capture_default_str()->group(deep);
  app->add_option("--epsilon-start", c.train.epsilon_start)->capture_default_str()->group(deep);
  app->add_option("--epsilon-end", c.train.epsilon_end)->capture_default_str()->group(deep);
  app->add_option("--epsilon-decay", c.train.epsilon_decay_steps)->capture_default_str()->group(deep);
  app->footer("--config FILE reads flat `key = value` lines named after the flags above; "
              "flags on the command line override it.");
}

// Expands `--config FILE` into `--key value` pairs placed before the other
// arguments; with last-wins option policy, explicit flags take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string file;
    std::size_t erase = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      erase = 2;
    } else if (args[i].starts_with("--config=")) {
      file = args[i].substr(9);
      erase = 1;
    } else {
      continue;
    }
    if (i < 2) throw ConfigError("--config belongs after the subcommand");
    std::vector<std::string> injected;
    for (const auto& [key, value] : read_key_values(file)) {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + erase));
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    break;
  }
  return args;
}

void print_summary(const std::string& label, const AggregateReport& r) {
  std::printf("%s: runs %d, mean goal visitations %.2f, converged %.2f, mean first optimal episode %.2f\n",
              label.c_str(), r.runs(), r.mean_goal_visits, r.convergence_rate(), r.mean_first_optimal_episode());
}

void cmd_run(const ExperimentArgs& args) {
  const ExperimentConfig cfg = args.resolve();
  const std::vector<RunMetrics> runs = run_suite(cfg);
  if (cfg.tier == Tier::Tabular) {
    print_summary(std::string(to_string(cfg.algorithm)), aggregate(runs, cfg.chain_n));
  } else {
    double goals = 0;
    for (const auto& r : runs) goals += r.goal_visits();
    std::printf("%s: runs %d, mean goal visitations %.2f\n", std::string(to_string(cfg.algorithm)).c_str(),
                cfg.runs, goals / cfg.runs);
  }
  if (!cfg.out_dir.empty()) std::printf("wrote %s\n", cfg.out_dir.string().c_str());
}

// Approx runs end mid-episode, so their episode counts differ; aggregate
// over the shortest run.
AggregateReport aggregate_dir(RunDirectory& dir) {
  std::size_t shortest = dir.runs.front().episodes.size();
  for (const auto& r : dir.runs) shortest = std::min(shortest, r.episodes.size());
  for (auto& r : dir.runs) r.episodes.resize(shortest);
  return aggregate(dir.runs, dir.chain_n);
}

void cmd_aggregate(const fs::path& path) {
  RunDirectory dir = load_run_directory(path);
  const AggregateReport report = aggregate_dir(dir);
  emit_aggregate_csv(report, path / "aggregate.csv");
  print_summary(dir.label, report);
  std::printf("wrote %s\n", (path / "aggregate.csv").string().c_str());
}

void cmd_compare(const fs::path& a_path, const fs::path& b_path) {
  const RunDirectory a = load_run_directory(a_path);
  const RunDirectory b = load_run_directory(b_path);
  const MannWhitneyResult r = compare(a.runs, b.runs);
  auto mean_goals = [](const RunDirectory& d) {
    double sum = 0;
    for (const auto& run : d.runs) sum += run.goal_visits();
    return sum / static_cast<double>(d.runs.size());
  };
  std::printf("%s mean goal visitations %.2f (%zu runs)\n", a.label.c_str(), mean_goals(a), a.runs.size());
  std::printf("%s mean goal visitations %.2f (%zu runs)\n", b.label.c_str(), mean_goals(b), b.runs.size());
  std::printf("Mann-Whitney U = %s, z = %.4f, one-sided p (first > second) = %.6g\n",
              format_number(r.u).c_str(), r.z, r.p_value);
}

void cmd_plot(const std::vector<std::string>& dirs, const fs::path& out, const std::string& metric) {
  std::vector<NamedReport> reports;
  for (const auto& d : dirs) {
    RunDirectory dir = load_run_directory(d);
    std::string label = dir.label;
    for (const auto& r : reports) {
      if (r.name == label) label += " (" + fs::path(d).filename().string() + ")";
    }
    reports.push_back({label, aggregate_dir(dir)});
  }
  emit_plot(reports, out, metric == "goals" ? PlotMetric::CumulativeGoals : PlotMetric::Steps);
  std::printf("wrote %s\n", out.string().c_str());
}

void apply_sweep_value(ExperimentArgs& a, const std::string& param, const std::string& value) {
  try {
    if (param == "select-best-int") a.select_best_int = std::stoi(value);
    else if (param == "heads") a.heads = std::stoi(value);
    else if (param == "gamma") a.gamma = std::stod(value);
    else if (param == "mask-prob") a.mask_prob = std::stod(value);
    else if (param == "alpha") a.cfg.agent.alpha = std::stod(value);
    else if (param == "epsilon") a.cfg.agent.epsilon = std::stod(value);
    else if (param == "learning-rate") a.cfg.train.learning_rate = std::stod(value);
    else throw ConfigError("cannot sweep '" + param + "'");
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError("bad value '" + value + "' for --" + param);
  }
}

void cmd_sweep(ExperimentArgs args, const std::string& param, const std::vector<std::string>& values) {
  if (args.out.empty()) throw ConfigError("sweep needs --out");
  const fs::path root = args.out;
  std::vector<std::pair<std::string, ExperimentConfig>> plan;
  for (const auto& v : values) {
    ExperimentArgs a = args;
    apply_sweep_value(a, param, v);
    a.out = (root / (param + "_" + v)).string();
    plan.emplace_back(v, a.resolve());
  }
  fs::create_directories(root);
  std::ofstream csv(root / "sweep.csv");
  if (!csv) throw std::runtime_error("cannot write " + (root / "sweep.csv").string());
  csv << "value,mean_goal_visits,convergence_rate,mean_first_optimal_episode\n";
  for (const auto& [value, cfg] : plan) {
    std::vector<RunMetrics> runs = run_suite(cfg);
    RunDirectory dir{{}, std::move(runs), cfg.chain_n, param + "=" + value};
    const AggregateReport r = aggregate_dir(dir);
    print_summary(dir.label, r);
    csv << value << ',' << format_number(r.mean_goal_visits) << ',' << format_number(r.convergence_rate()) << ','
        << format_number(r.mean_first_optimal_episode()) << '\n';
  }
  if (!csv) throw std::runtime_error("failed writing sweep.csv");
  std::printf("wrote %s\n", (root / "sweep.csv").string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-learning Q-ensembles on the chain MDP"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ExperimentArgs run_args;
  auto* run = app.add_subcommand("run", "run a seeded multi-run suite");
  add_experiment_options(run, run_args);
  run->add_option("--out", run_args.out, "output directory for run_<i>.csv and config.ini");

  std::string agg_dir;
  auto* agg = app.add_subcommand("aggregate", "write aggregate.csv for a run directory");
  agg->add_option("DIR", agg_dir)->required()->check(CLI::ExistingDirectory);

  std::string cmp_a, cmp_b;
  auto* cmp = app.add_subcommand("compare", "one-sided Mann-Whitney test on goal visitations");
  cmp->add_option("DIR_A", cmp_a)->required()->check(CLI::ExistingDirectory);
  cmp->add_option("DIR_B", cmp_b)->required()->check(CLI::ExistingDirectory);

  std::vector<std::string> plot_dirs;
  std::string plot_out, plot_metric = "steps";
  auto* plot = app.add_subcommand("plot", "SVG learning curves");
  plot->add_option("DIR", plot_dirs)->required()->check(CLI::ExistingDirectory);
  plot->add_option("--out", plot_out)->required();
  plot->add_option("--metric", plot_metric)->check(CLI::IsMember({"steps", "goals"}))->capture_default_str();

  ExperimentArgs sweep_args;
  std::string sweep_param = "select-best-int";
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "repeat a suite over values of one parameter");
  add_experiment_options(sweep, sweep_args);
  sweep->add_option("--out", sweep_args.out, "root directory; one subdirectory per value")->required();
  sweep->add_option("--param", sweep_param)
      ->check(CLI::IsMember({"select-best-int", "heads", "gamma", "mask-prob", "alpha", "epsilon", "learning-rate"}))
      ->capture_default_str();
  sweep->add_option("--values", sweep_values)->required()->delimiter(',');

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::vector<char*> ptrs;
    for (auto& a : args) ptrs.push_back(a.data());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }

  try {
    if (*run) cmd_run(run_args);
    else if (*agg) cmd_aggregate(agg_dir);
    else if (*cmp) cmd_compare(cmp_a, cmp_b);
    else if (*plot) cmd_plot(plot_dirs, plot_out, plot_metric);
    else if (*sweep) cmd_sweep(sweep_args, sweep_param, sweep_values);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const RunFailure& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
