#include "qshare/tabular/agents.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace qshare::tabular {

void AgentConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (heads < 1) throw std::invalid_argument("heads must be at least 1");
  if (select_best_int < 1) throw std::invalid_argument("select_best_int must be at least 1");
  if (!(mask_prob > 0.0 && mask_prob <= 1.0)) throw std::invalid_argument("mask_prob must lie in (0, 1]");
  if (!(init_low <= init_high)) throw std::invalid_argument("init_low must not exceed init_high");
}

namespace {

Action epsilon_greedy(std::span<const double, envs::kActionCount> row, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && rng.bernoulli(epsilon)) {
    return envs::action_from_index(static_cast<int>(rng.uniform_index(envs::kActionCount)));
  }
  return greedy_action(row, rng);
}

}  // namespace

QLearningAgent::QLearningAgent(int n_states, const AgentConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed), table_(n_states) {
  cfg_.validate();
}

Action QLearningAgent::act(State s) { return epsilon_greedy(table_.row(s), cfg_.epsilon, rng_); }

void QLearningAgent::observe(const Transition& t) { q_update(table_, t, cfg_.alpha, cfg_.gamma); }

DoubleQAgent::DoubleQAgent(int n_states, const AgentConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed), a_(n_states), b_(n_states) {
  cfg_.validate();
}

Action DoubleQAgent::act(State s) {
  std::array<double, envs::kActionCount> sum{};
  for (int i = 0; i < envs::kActionCount; ++i) sum[i] = a_.row(s)[i] + b_.row(s)[i];
  return epsilon_greedy(std::span<const double, envs::kActionCount>(sum), cfg_.epsilon, rng_);
}

void DoubleQAgent::observe(const Transition& t) {
  double_q_update(a_, b_, t, cfg_.alpha, cfg_.gamma, rng_);
}

EnsembleAgent::EnsembleAgent(int n_states, const AgentConfig& cfg, EnsembleRule rule)
    : cfg_(cfg), rule_(rule), rng_(cfg.seed) {
  cfg_.validate();
  ens_ = make_ensemble(cfg_.heads, n_states, cfg_.init_low, cfg_.init_high, rng_);
  ens_.best_head = sample_active_head(cfg_.heads, rng_);
  ens_.random_head = ens_.best_head;
  mask_.assign(static_cast<std::size_t>(cfg_.heads), 1);
}

void EnsembleAgent::begin_episode() { ens_.active_head = sample_active_head(ens_.size(), rng_); }

Action EnsembleAgent::act(State s) {
  return greedy_action(ens_.heads[static_cast<std::size_t>(ens_.active_head)].row(s), rng_);
}

void EnsembleAgent::observe(const Transition& t) {
  HeadMask mask;
  if (cfg_.mask_prob < 1.0) {
    for (auto& m : mask_) m = rng_.bernoulli(cfg_.mask_prob) ? 1 : 0;
    mask = mask_;
  }

  switch (rule_) {
    case EnsembleRule::Bootstrap: bootstrap_update(ens_, t, cfg_.alpha, cfg_.gamma, mask); break;
    case EnsembleRule::RandomHead: random_head_update(ens_, t, cfg_.alpha, cfg_.gamma, mask); break;
    case EnsembleRule::Shared: shared_update(ens_, t, cfg_.alpha, cfg_.gamma, mask); break;
  }

  ++ens_.step_count;
  if (ens_.step_count % cfg_.select_best_int == 0) {
    if (rule_ == EnsembleRule::Shared) {
      ens_.best_head = select_best_head(ens_, t.state, t.action);
    } else if (rule_ == EnsembleRule::RandomHead) {
      ens_.random_head = sample_active_head(ens_.size(), rng_);
    }
  }
}

std::string_view to_string(TabularAlgorithm algo) {
  switch (algo) {
    case TabularAlgorithm::QLearning: return "qlearn";
    case TabularAlgorithm::DoubleQ: return "doubleq";
    case TabularAlgorithm::Bootstrap: return "bootstrap";
    case TabularAlgorithm::RandomHead: return "randomhead";
    case TabularAlgorithm::Shared: return "shared";
  }
  return "?";
}

std::unique_ptr<TabularAgent> make_agent(TabularAlgorithm algo, int n_states, const AgentConfig& cfg) {
  switch (algo) {
    case TabularAlgorithm::QLearning: return std::make_unique<QLearningAgent>(n_states, cfg);
    case TabularAlgorithm::DoubleQ: return std::make_unique<DoubleQAgent>(n_states, cfg);
    case TabularAlgorithm::Bootstrap:
      return std::make_unique<EnsembleAgent>(n_states, cfg, EnsembleRule::Bootstrap);
    case TabularAlgorithm::RandomHead:
      return std::make_unique<EnsembleAgent>(n_states, cfg, EnsembleRule::RandomHead);
    case TabularAlgorithm::Shared:
      return std::make_unique<EnsembleAgent>(n_states, cfg, EnsembleRule::Shared);
  }
  throw std::invalid_argument("unknown tabular algorithm");
}

}  // namespace qshare::tabular
