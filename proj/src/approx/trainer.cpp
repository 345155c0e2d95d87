#include "qshare/approx/trainer.hpp"

#include <stdexcept>

#include "qshare/approx/policy.hpp"
#include "qshare/approx/replay_buffer.hpp"

namespace qshare::approx {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::DQN: return "dqn";
    case AgentKind::DDQN: return "ddqn";
    case AgentKind::Bootstrapped: return "bootstrapped";
    case AgentKind::RandomHeadBootstrapped: return "randomhead";
    case AgentKind::SharedBootstrapped: return "shared-bootstrapped";
    case AgentKind::EnsembleVoting: return "ensemble-voting";
    case AgentKind::SharedEnsembleVoting: return "shared-ensemble-voting";
  }
  return "?";
}

bool is_single_head(AgentKind kind) { return kind == AgentKind::DQN || kind == AgentKind::DDQN; }

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be positive");
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be non-negative");
  if (target_sync_interval < 1) throw std::invalid_argument("target_sync_interval must be positive");
  if (train_interval < 1) throw std::invalid_argument("train_interval must be positive");
  if (select_best_int < 1) throw std::invalid_argument("select_best_int must be at least 1");
  if (buffer_capacity < 1) throw std::invalid_argument("buffer_capacity must be positive");
  if (total_steps < 0) throw std::invalid_argument("total_steps must be non-negative");
  if (heads < 1) throw std::invalid_argument("heads must be positive");
  if (hidden < 1) throw std::invalid_argument("hidden width must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    throw std::invalid_argument("epsilon bounds must lie in [0, 1]");
  }
  if (epsilon_decay_steps < 1) throw std::invalid_argument("epsilon_decay_steps must be positive");
  if (!(mask_prob > 0.0 && mask_prob <= 1.0)) throw std::invalid_argument("mask_prob must lie in (0, 1]");
}

namespace {

bool uses_active_head(AgentKind kind) {
  return kind == AgentKind::Bootstrapped || kind == AgentKind::RandomHeadBootstrapped ||
         kind == AgentKind::SharedBootstrapped;
}

bool uses_vote(AgentKind kind) {
  return kind == AgentKind::EnsembleVoting || kind == AgentKind::SharedEnsembleVoting;
}

bool uses_best_head(AgentKind kind) {
  return kind == AgentKind::SharedBootstrapped || kind == AgentKind::SharedEnsembleVoting;
}

double epsilon_at(const TrainConfig& cfg, std::int64_t step) {
  if (step >= cfg.epsilon_decay_steps) return cfg.epsilon_end;
  const double frac = static_cast<double>(step) / static_cast<double>(cfg.epsilon_decay_steps);
  return cfg.epsilon_start + frac * (cfg.epsilon_end - cfg.epsilon_start);
}

Action greedy_single(const MultiHeadNet& net, const std::vector<double>& state, int head) {
  const QValues q = net.forward(std::span<const std::vector<double>>(&state, 1));
  return head_greedy_action(q.head_row(0, head));
}

LossResult compute_loss(AgentKind kind, const MultiHeadNet& net, std::span<const Transition> batch,
                        double gamma, int best_head, int random_head) {
  switch (kind) {
    case AgentKind::DQN: return dqn_loss(net, batch, gamma);
    case AgentKind::DDQN: return ddqn_loss(net, batch, gamma);
    case AgentKind::Bootstrapped:
    case AgentKind::EnsembleVoting: return bootstrapped_loss(net, batch, gamma);
    case AgentKind::RandomHeadBootstrapped: return shared_loss(net, batch, gamma, random_head);
    case AgentKind::SharedBootstrapped:
    case AgentKind::SharedEnsembleVoting: return shared_loss(net, batch, gamma, best_head);
  }
  throw std::invalid_argument("unknown agent kind");
}

}  // namespace

TrainResult train(AgentKind kind, envs::Environment& env, const TrainConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const NetShape shape{env.state_count(), cfg.hidden, is_single_head(kind) ? 1 : cfg.heads};
  TrainResult result{RunMetrics{}, MultiHeadNet::initialise(shape, rng), {}, 0};
  MultiHeadNet& net = result.net;
  const int heads = shape.heads;

  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));
  // Advising heads start from a uniform draw, as does the behaviour head.
  int best_head = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(heads)));
  int random_head = best_head;

  std::int64_t step_count = 0;
  int episode = 0;
  while (step_count < cfg.total_steps) {
    envs::State s = env.reset();
    std::vector<double> x = env.encode(s);
    const int active_head = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(heads)));
    EpisodeRecord record{episode, 0, 0.0, false};
    bool finished = false;

    while (step_count < cfg.total_steps) {
      Action a;
      if (rng.bernoulli(epsilon_at(cfg, step_count))) {
        a = envs::action_from_index(static_cast<int>(rng.uniform_index(kActions)));
      } else if (uses_vote(kind)) {
        a = ensemble_vote(net, x, rng);
      } else if (uses_active_head(kind)) {
        a = greedy_single(net, x, active_head);
      } else {
        a = greedy_single(net, x, 0);
      }

      const envs::StepResult r = env.step(a);
      std::vector<double> x_next = env.encode(r.next_state);
      Transition t{x, envs::to_index(a), r.reward, x_next, r.terminal && !r.truncated, {}};
      if (cfg.mask_prob < 1.0) {
        t.mask.resize(static_cast<std::size_t>(heads));
        for (auto& m : t.mask) m = rng.bernoulli(cfg.mask_prob) ? 1 : 0;
      }
      buffer.push(std::move(t));
      ++step_count;
      ++record.steps;
      record.total_reward += r.reward;

      if (step_count % cfg.train_interval == 0 && buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
        const auto batch = buffer.sample_minibatch(static_cast<std::size_t>(cfg.batch_size), rng);
        const LossResult loss = compute_loss(kind, net, batch, cfg.gamma, best_head, random_head);
        grad_step(net, loss.grad, cfg.learning_rate);
        ++result.gradient_steps;
      }
      if (step_count % cfg.target_sync_interval == 0) net.sync_target();
      if (step_count % cfg.select_best_int == 0) {
        if (uses_best_head(kind)) {
          best_head = select_best_head_deep(net, x, a);
          result.advisor_history.push_back(best_head);
        } else if (kind == AgentKind::RandomHeadBootstrapped) {
          random_head = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(heads)));
          result.advisor_history.push_back(random_head);
        }
      }

      x = std::move(x_next);
      if (r.terminal) {
        finished = true;
        break;
      }
    }

    if (finished) {
      record.reached_goal = record.total_reward > 0.0;
      result.metrics.episodes.push_back(record);
      ++episode;
    }
  }
  return result;
}

EpisodeRecord evaluate_greedy(AgentKind kind, const MultiHeadNet& net, envs::Environment& env, Rng& rng) {
  EpisodeRecord record;
  envs::State s = env.reset();
  for (;;) {
    const std::vector<double> x = env.encode(s);
    const Action a = is_single_head(kind) ? greedy_single(net, x, 0) : ensemble_vote(net, x, rng);
    const envs::StepResult r = env.step(a);
    ++record.steps;
    record.total_reward += r.reward;
    s = r.next_state;
    if (r.terminal) break;
  }
  record.reached_goal = record.total_reward > 0.0;
  return record;
}

}  // namespace qshare::approx
