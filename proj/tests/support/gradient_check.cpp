#include "gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qshare::testing {

TinyProblem random_tiny_problem(Rng& rng, int max_heads) {
  const approx::NetShape shape{2 + static_cast<int>(rng.uniform_index(9)), 1 + static_cast<int>(rng.uniform_index(8)),
                               1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(max_heads)))};
  TinyProblem p{approx::MultiHeadNet(shape), {}, rng.uniform(0.5, 0.99)};
  for (auto block : p.net.online().blocks()) {
    for (double& v : block) v = rng.uniform(-1.0, 1.0);
  }
  for (auto block : p.net.target().blocks()) {
    for (double& v : block) v = rng.uniform(-1.0, 1.0);
  }
  const int batch = 1 + static_cast<int>(rng.uniform_index(4));
  for (int b = 0; b < batch; ++b) {
    approx::Transition t;
    t.state.resize(static_cast<std::size_t>(shape.inputs));
    t.next_state.resize(static_cast<std::size_t>(shape.inputs));
    for (double& v : t.state) v = rng.uniform(-1.0, 1.0);
    for (double& v : t.next_state) v = rng.uniform(-1.0, 1.0);
    t.action = static_cast<int>(rng.uniform_index(4));
    t.reward = rng.uniform(-10.0, 10.0);
    t.terminal = rng.bernoulli(0.25);
    p.batch.push_back(std::move(t));
  }
  return p;
}

GradientReport check_gradients(const approx::MultiHeadNet& net, const LossFn& loss, double step, double relative,
                               double absolute_floor) {
  static const char* const kBlockNames[] = {"trunk_w", "trunk_b", "head_w", "head_b"};
  const approx::LossResult analytic = loss(net);
  const auto grads = analytic.grad.values.blocks();
  approx::MultiHeadNet probe = net;
  auto params = probe.online().blocks();

  GradientReport report;
  for (std::size_t b = 0; b < params.size(); ++b) {
    const double unscale = b < 2 ? 1.0 / analytic.grad.trunk_scale : 1.0;
    for (std::size_t i = 0; i < params[b].size(); ++i) {
      const double saved = params[b][i];
      params[b][i] = saved + step;
      const double up = loss(probe).loss;
      params[b][i] = saved - step;
      const double down = loss(probe).loss;
      params[b][i] = saved;

      const double fd = (up - down) / (2.0 * step);
      const double an = grads[b][i] * unscale;
      const double err = std::abs(an - fd);
      const double scale = std::max(std::abs(an), std::abs(fd));
      ++report.checked;
      if (scale > 0.0) report.worst_relative = std::max(report.worst_relative, err / scale);
      if (err > std::max(relative * scale, absolute_floor)) {
        if (report.failures++ == 0) {
          std::ostringstream msg;
          msg << kBlockNames[b] << "[" << i << "]: analytic " << an << " vs finite difference " << fd;
          report.first_failure = msg.str();
        }
      }
    }
  }
  return report;
}

}  // namespace qshare::testing
