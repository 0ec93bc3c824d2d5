#pragma once

// Two-state, two-action deterministic MDP used to check the Q-learning update
// against value iteration. Action a moves the system to state a.
//
//   reward(0,0) = 1   reward(0,1) = 0
//   reward(1,0) = 0   reward(1,1) = 2
//
// With discount 0.9 the optimal policy leaves state 0 for state 1 and stays
// there, which a one-step greedy learner would get wrong.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "vlcudn/rl_agent.hpp"

namespace vlcudn::testing {

struct TwoStateMdp {
  std::array<std::array<double, 2>, 2> reward{{{1.0, 0.0}, {0.0, 2.0}}};
  double discount = 0.9;

  std::size_t next(std::size_t /*state*/, std::size_t action) const { return action; }

  using QValues = std::array<std::array<double, 2>, 2>;

  QValues value_iteration(double tol = 1e-10) const {
    QValues q{};
    for (int it = 0; it < 100000; ++it) {
      QValues nq{};
      double delta = 0.0;
      for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t a = 0; a < 2; ++a) {
          const auto& succ = q[next(s, a)];
          nq[s][a] = reward[s][a] + discount * std::max(succ[0], succ[1]);
          delta = std::max(delta, std::abs(nq[s][a] - q[s][a]));
        }
      }
      q = nq;
      if (delta < tol) {
        break;
      }
    }
    return q;
  }
};

inline StateKey mdp_state(std::size_t s) {
  StateKey k;
  k.density = static_cast<std::uint32_t>(s + 1);
  return k;
}

// Runs epsilon-greedy Q-learning through the library's select/update path.
inline QTable learn_two_state(const TwoStateMdp& mdp, std::size_t steps, double epsilon,
                              double learning_rate, std::uint64_t seed,
                              double reward_scale = 1.0) {
  const ActionSet actions(1, 1.0, 1);
  QTable q(actions.size());
  Rng rng(seed);
  std::size_t s = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t a = select_action(q, mdp_state(s), actions, epsilon, rng);
    const std::size_t s2 = mdp.next(s, a);
    update_q(q, {mdp_state(s), a, reward_scale * mdp.reward[s][a], mdp_state(s2)}, learning_rate,
             mdp.discount);
    s = s2;
  }
  return q;
}

}  // namespace vlcudn::testing
