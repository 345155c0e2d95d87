#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace qshare::envs {

enum class Action : std::uint8_t { JumpToS1 = 0, Right = 1, Left = 2, NoOp = 3 };

inline constexpr int kActionCount = 4;
inline constexpr std::array<Action, kActionCount> kAllActions = {
    Action::JumpToS1, Action::Right, Action::Left, Action::NoOp};

constexpr int to_index(Action a) { return static_cast<int>(a); }
constexpr Action action_from_index(int i) { return static_cast<Action>(i); }
std::string_view to_string(Action a);

/// 1-based position on the chain. Indices 1 and n are terminal.
struct State {
  int index = 0;
  friend constexpr bool operator==(State, State) = default;
};

struct ChainSpec {
  int n = 0;
  double goal_reward = 10.0;
  double fail_reward = -10.0;
  int step_cap = 0;

  /// Chain of n states with the default cap of 100 * n steps.
  static ChainSpec with_states(int n);
  /// Throws std::invalid_argument when n < 3 or step_cap < n.
  void validate() const;
  bool is_terminal(State s) const { return s.index == 1 || s.index == n; }
};

struct StepResult {
  State next_state;
  double reward = 0.0;
  /// Entered s_1 / s_n, or the step cap ran out.
  bool terminal = false;
  /// Set only when the episode ended because of the step cap.
  bool truncated = false;
};

/// Deterministic model of the chain, without any episode bookkeeping.
/// Throws std::logic_error when s is terminal or out of range.
StepResult transition(State s, Action a, const ChainSpec& spec);

/// Length of the shortest path from s_2 to s_n.
int optimal_steps(const ChainSpec& spec);

/// Contract shared by every agent: episodic reset/step plus a dense
/// state encoding for function approximators.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual State reset() = 0;
  virtual StepResult step(Action a) = 0;
  virtual int action_count() const = 0;
  virtual int state_count() const = 0;
  virtual std::vector<double> encode(State s) const = 0;
};

/// One-hot vector of length n with 1.0 at position index - 1.
std::vector<double> one_hot(State s, int n);

class ChainEnv final : public Environment {
 public:
  explicit ChainEnv(ChainSpec spec);

  State reset() override;
  /// Throws std::logic_error when called after the episode ended.
  StepResult step(Action a) override;
  int action_count() const override { return kActionCount; }
  int state_count() const override { return spec_.n; }
  std::vector<double> encode(State s) const override { return one_hot(s, spec_.n); }

  const ChainSpec& spec() const { return spec_; }
  State state() const { return state_; }
  int steps_taken() const { return steps_; }
  bool done() const { return done_; }

 private:
  ChainSpec spec_;
  State state_{2};
  int steps_ = 0;
  bool done_ = false;
};

}  // namespace qshare::envs
