#pragma once

// Tabular Q-learning power control: quantized state, joint power actions,
// epsilon-greedy selection and the one-step Bellman update.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vlcudn/mobility.hpp"

namespace vlcudn {

struct AgentConfig {
  std::size_t power_levels = 5;  // L; the action set has L + 1 levels
  double max_power_w = 4e-3;  // X_max
  double learning_rate = 0.9;  // alpha
  double discount = 0.3;  // beta
  double epsilon_start = 0.9;
  double epsilon_end = 0.1;
  std::size_t epsilon_decay_slots = 1000;
  std::size_t warmup_slots = 20;
  std::size_t max_slots = 3000;  // K_max
  bool replay = false;
  std::size_t replay_batch = 16;
  std::size_t action_cap = 1'000'000;

  void validate() const;
};

// Joint power allocations Omega^N in lexicographic order; UE 0 is the most
// significant digit, so index 0 is all-zero and the last index is all-X_max.
class ActionSet {
 public:
  // Throws DomainError if n_ues == 0 or (L+1)^N exceeds `cap`.
  ActionSet(std::size_t power_levels, double max_power_w, std::size_t n_ues,
            std::size_t cap = 1'000'000);

  std::size_t size() const { return size_; }
  std::size_t ue_count() const { return n_ues_; }
  const std::vector<double>& levels() const { return levels_; }

  std::vector<std::size_t> level_indices(std::size_t action) const;
  std::vector<double> powers(std::size_t action) const;
  std::size_t index_of(std::span<const std::size_t> level_indices) const;

 private:
  std::vector<double> levels_;
  std::size_t n_ues_ = 0;
  std::size_t size_ = 0;
};

ActionSet enumerate_actions(std::size_t power_levels, double max_power_w, std::size_t n_ues,
                            std::size_t cap = 1'000'000);

struct StateKey {
  std::vector<std::uint16_t> rate_bins;
  std::vector<std::uint16_t> gain_bins;
  std::uint32_t density = 0;

  friend bool operator==(const StateKey&, const StateKey&) = default;

  // "d3|r0.0.1|g2.3.1"
  std::string to_string() const;
  static StateKey parse(std::string_view text);
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& key) const noexcept;
};

// Uniform half-open bins [lo, hi) over [0, max]; values at or beyond max, and
// negative values, clamp to the extreme bins.
struct StateQuantizer {
  std::size_t rate_bins = 4;
  std::size_t gain_bins = 4;
  double rate_max_bps = 1.0;  // W_n log2(1 + sinr_cap)
  double gain_max = 1.0;  // zero-offset serving gain

  static std::size_t bin(double value, double max, std::size_t bins);

  // Throws DimensionMismatchError unless both vectors have `density` entries.
  StateKey quantize(std::span<const double> rates_bps, std::span<const double> gains,
                    std::size_t density) const;
};

// Sparse Q(s, a) with an implicit 0 for every entry never written.
class QTable {
 public:
  explicit QTable(std::size_t n_actions) : n_actions_(n_actions) {}

  std::size_t action_count() const { return n_actions_; }
  std::size_t state_count() const { return rows_.size(); }
  std::size_t entry_count() const { return entries_; }

  double get(const StateKey& s, std::size_t action) const;
  // Throws RuntimeAbort on a non-finite value.
  void set(const StateKey& s, std::size_t action, double value);
  double max_value(const StateKey& s) const;
  // Empty span for an unseen state.
  std::span<const double> row(const StateKey& s) const;

  // Written entries only, in unspecified state order.
  void for_each_entry(
      const std::function<void(const StateKey&, std::size_t, double)>& visit) const;

 private:
  struct Row {
    std::vector<double> q;
    std::vector<bool> written;
  };
  std::size_t n_actions_;
  std::size_t entries_ = 0;
  std::unordered_map<StateKey, Row, StateKeyHash> rows_;
};

struct Experience {
  StateKey state;
  std::size_t action = 0;
  double utility = 0.0;
  StateKey next_state;
};

StateKey quantize_state(std::span<const double> rates_bps, std::span<const double> gains,
                        std::size_t density, const StateQuantizer& quantizer);

// A maximizer of Q(s, .), uniform among ties (an unseen state ties everywhere).
std::size_t greedy_action(const QTable& q, const StateKey& s, Rng& rng);

// With probability 1 - epsilon the greedy action; otherwise one of the other
// |A| - 1 actions uniformly.
std::size_t select_action(const QTable& q, const StateKey& s, const ActionSet& actions,
                          double epsilon, Rng& rng);

// Q(s,a) <- (1 - alpha) Q(s,a) + alpha (u + beta max_a' Q(s', a')).
void update_q(QTable& q, const Experience& e, double learning_rate, double discount);

// Linear from epsilon_start at slot 0 to epsilon_end at epsilon_decay_slots.
double epsilon_at(std::size_t slot, const AgentConfig& config);

// Uniform random action during the first warmup_slots slots, nullopt afterwards.
std::optional<std::size_t> warmup_policy(std::size_t slot, const AgentConfig& config,
                                         const ActionSet& actions, Rng& rng);

// Online agent: acts, learns from each experience as it arrives, keeps the
// experience pool and optionally replays a random batch after every update.
class RpicAgent {
 public:
  RpicAgent(AgentConfig config, ActionSet actions);

  std::size_t act(const StateKey& s, std::size_t slot, Rng& rng);
  void learn(Experience e, Rng& rng);

  const AgentConfig& config() const { return config_; }
  const ActionSet& actions() const { return actions_; }
  const QTable& q() const { return q_; }
  QTable& q() { return q_; }
  const std::vector<Experience>& pool() const { return pool_; }

 private:
  AgentConfig config_;
  ActionSet actions_;
  QTable q_;
  std::vector<Experience> pool_;
};

}  // namespace vlcudn
