#include "qshare/envs/chain.hpp"

#include <stdexcept>
#include <string>

namespace qshare::envs {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::JumpToS1: return "JumpToS1";
    case Action::Right: return "Right";
    case Action::Left: return "Left";
    case Action::NoOp: return "NoOp";
  }
  return "?";
}

ChainSpec ChainSpec::with_states(int n) {
  ChainSpec spec;
  spec.n = n;
  spec.step_cap = 100 * n;
  return spec;
}

void ChainSpec::validate() const {
  if (n < 3) throw std::invalid_argument("chain needs at least 3 states, got " + std::to_string(n));
  if (step_cap < n) {
    throw std::invalid_argument("step cap " + std::to_string(step_cap) +
                                " is shorter than the chain (" + std::to_string(n) + ")");
  }
}

StepResult transition(State s, Action a, const ChainSpec& spec) {
  if (s.index < 1 || s.index > spec.n) {
    throw std::logic_error("state index " + std::to_string(s.index) + " outside the chain");
  }
  if (spec.is_terminal(s)) {
    throw std::logic_error("step taken from terminal state s_" + std::to_string(s.index));
  }
  State next = s;
  switch (a) {
    case Action::JumpToS1: next.index = 1; break;
    case Action::Right: next.index = s.index + 1; break;
    case Action::Left: next.index = s.index - 1; break;
    case Action::NoOp: break;
  }
  StepResult result;
  result.next_state = next;
  if (next.index == spec.n) {
    result.reward = spec.goal_reward;
    result.terminal = true;
  } else if (next.index == 1) {
    result.reward = spec.fail_reward;
    result.terminal = true;
  }
  return result;
}

int optimal_steps(const ChainSpec& spec) { return spec.n - 2; }

std::vector<double> one_hot(State s, int n) {
  if (s.index < 1 || s.index > n) throw std::out_of_range("state index outside one-hot range");
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(s.index - 1)] = 1.0;
  return v;
}

ChainEnv::ChainEnv(ChainSpec spec) : spec_(spec) { spec_.validate(); }

State ChainEnv::reset() {
  state_ = State{2};
  steps_ = 0;
  done_ = false;
  return state_;
}

StepResult ChainEnv::step(Action a) {
  if (done_) throw std::logic_error("step called on a finished episode; call reset() first");
  StepResult result = transition(state_, a, spec_);
  ++steps_;
  state_ = result.next_state;
  if (!result.terminal && steps_ >= spec_.step_cap) {
    result.terminal = true;
    result.truncated = true;
  }
  done_ = result.terminal;
  return result;
}

}  // namespace qshare::envs
