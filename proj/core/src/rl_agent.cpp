#include "vlcudn/rl_agent.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "vlcudn/error.hpp"

namespace vlcudn {

void AgentConfig::validate() const {
  if (power_levels < 1) {
    throw DomainError("power_levels must be >= 1");
  }
  if (!(max_power_w > 0.0)) {
    throw DomainError("max power must be positive");
  }
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw DomainError("learning rate must lie in (0, 1]");
  }
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw DomainError("discount must lie in [0, 1)");
  }
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
        epsilon_end <= 1.0 && epsilon_start >= epsilon_end)) {
    throw DomainError("need 1 >= epsilon_start >= epsilon_end >= 0");
  }
  if (max_slots == 0 || warmup_slots >= max_slots) {
    throw DomainError("need warmup_slots < max_slots");
  }
  if (replay && replay_batch == 0) {
    throw DomainError("replay batch must be positive when replay is enabled");
  }
}

// ---- ActionSet ------------------------------------------------------------

ActionSet::ActionSet(std::size_t power_levels, double max_power_w, std::size_t n_ues,
                     std::size_t cap)
    : n_ues_(n_ues) {
  if (n_ues == 0) {
    throw DomainError("action set needs at least one UE");
  }
  if (power_levels == 0) {
    throw DomainError("power_levels must be >= 1");
  }
  const std::size_t base = power_levels + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n_ues; ++i) {
    if (total > cap / base) {
      throw DomainError("joint action space (" + std::to_string(base) + "^" +
                        std::to_string(n_ues) + ") exceeds cap " + std::to_string(cap));
    }
    total *= base;
  }
  if (total > cap) {
    throw DomainError("joint action space exceeds cap " + std::to_string(cap));
  }
  size_ = total;
  levels_.resize(base);
  for (std::size_t i = 0; i < base; ++i) {
    levels_[i] = static_cast<double>(i) * max_power_w / static_cast<double>(power_levels);
  }
}

std::vector<std::size_t> ActionSet::level_indices(std::size_t action) const {
  if (action >= size_) {
    throw DomainError("action index " + std::to_string(action) + " out of range");
  }
  const std::size_t base = levels_.size();
  std::vector<std::size_t> idx(n_ues_);
  for (std::size_t n = n_ues_; n-- > 0;) {
    idx[n] = action % base;
    action /= base;
  }
  return idx;
}

std::vector<double> ActionSet::powers(std::size_t action) const {
  const auto idx = level_indices(action);
  std::vector<double> out(idx.size());
  for (std::size_t n = 0; n < idx.size(); ++n) {
    out[n] = levels_[idx[n]];
  }
  return out;
}

std::size_t ActionSet::index_of(std::span<const std::size_t> level_indices) const {
  if (level_indices.size() != n_ues_) {
    throw DimensionMismatchError("level vector length differs from UE count");
  }
  std::size_t action = 0;
  for (std::size_t i : level_indices) {
    if (i >= levels_.size()) {
      throw DomainError("power level index out of range");
    }
    action = action * levels_.size() + i;
  }
  return action;
}

ActionSet enumerate_actions(std::size_t power_levels, double max_power_w, std::size_t n_ues,
                            std::size_t cap) {
  return ActionSet(power_levels, max_power_w, n_ues, cap);
}

// ---- StateKey -------------------------------------------------------------

namespace {

void append_bins(std::string& out, char tag, const std::vector<std::uint16_t>& bins) {
  out.push_back('|');
  out.push_back(tag);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (i > 0) {
      out.push_back('.');
    }
    out += std::to_string(bins[i]);
  }
}

template <typename T>
T parse_uint(std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DomainError("malformed integer '" + std::string(text) + "' in state key");
  }
  return value;
}

std::vector<std::uint16_t> parse_bins(std::string_view text) {
  std::vector<std::uint16_t> bins;
  if (text.empty()) {
    return bins;
  }
  std::size_t start = 0;
  while (true) {
    const auto dot = text.find('.', start);
    bins.push_back(parse_uint<std::uint16_t>(text.substr(start, dot - start)));
    if (dot == std::string_view::npos) {
      break;
    }
    start = dot + 1;
  }
  return bins;
}

}  // namespace

std::string StateKey::to_string() const {
  std::string out = "d" + std::to_string(density);
  append_bins(out, 'r', rate_bins);
  append_bins(out, 'g', gain_bins);
  return out;
}

StateKey StateKey::parse(std::string_view text) {
  const auto p1 = text.find('|');
  const auto p2 = p1 == std::string_view::npos ? p1 : text.find('|', p1 + 1);
  if (text.empty() || text[0] != 'd' || p2 == std::string_view::npos ||
      text.at(p1 + 1) != 'r' || p2 + 1 >= text.size() || text[p2 + 1] != 'g') {
    throw DomainError("malformed state key '" + std::string(text) + "'");
  }
  StateKey key;
  key.density = parse_uint<std::uint32_t>(text.substr(1, p1 - 1));
  key.rate_bins = parse_bins(text.substr(p1 + 2, p2 - p1 - 2));
  key.gain_bins = parse_bins(text.substr(p2 + 2));
  return key;
}

std::size_t StateKeyHash::operator()(const StateKey& key) const noexcept {
  // FNV-1a over the bin digits.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(key.density);
  for (auto b : key.rate_bins) {
    mix(b);
  }
  mix(0xffff);
  for (auto b : key.gain_bins) {
    mix(b);
  }
  return static_cast<std::size_t>(h);
}

// ---- quantization ---------------------------------------------------------

std::size_t StateQuantizer::bin(double value, double max, std::size_t bins) {
  if (bins <= 1 || !(value > 0.0)) {
    return 0;
  }
  if (value >= max) {
    return bins - 1;
  }
  const double width = max / static_cast<double>(bins);
  const auto idx = static_cast<std::size_t>(std::floor(value / width));
  return std::min(idx, bins - 1);
}

StateKey StateQuantizer::quantize(std::span<const double> rates_bps,
                                  std::span<const double> gains, std::size_t density) const {
  if (rates_bps.size() != density || gains.size() != density) {
    throw DimensionMismatchError("state vectors must have one entry per UE");
  }
  StateKey key;
  key.density = static_cast<std::uint32_t>(density);
  key.rate_bins.reserve(density);
  key.gain_bins.reserve(density);
  for (double r : rates_bps) {
    key.rate_bins.push_back(static_cast<std::uint16_t>(bin(r, rate_max_bps, rate_bins)));
  }
  for (double g : gains) {
    key.gain_bins.push_back(static_cast<std::uint16_t>(bin(g, gain_max, gain_bins)));
  }
  return key;
}

StateKey quantize_state(std::span<const double> rates_bps, std::span<const double> gains,
                        std::size_t density, const StateQuantizer& quantizer) {
  return quantizer.quantize(rates_bps, gains, density);
}

// ---- QTable ---------------------------------------------------------------

double QTable::get(const StateKey& s, std::size_t action) const {
  const auto it = rows_.find(s);
  return it == rows_.end() ? 0.0 : it->second.q.at(action);
}

void QTable::set(const StateKey& s, std::size_t action, double value) {
  if (!std::isfinite(value)) {
    throw RuntimeAbort("non-finite Q-value for state " + s.to_string());
  }
  if (action >= n_actions_) {
    throw DomainError("action index " + std::to_string(action) + " out of range");
  }
  auto [it, inserted] = rows_.try_emplace(s);
  Row& row = it->second;
  if (inserted) {
    row.q.assign(n_actions_, 0.0);
    row.written.assign(n_actions_, false);
  }
  if (!row.written[action]) {
    row.written[action] = true;
    ++entries_;
  }
  row.q[action] = value;
}

double QTable::max_value(const StateKey& s) const {
  const auto it = rows_.find(s);
  if (it == rows_.end()) {
    return 0.0;
  }
  return *std::max_element(it->second.q.begin(), it->second.q.end());
}

std::span<const double> QTable::row(const StateKey& s) const {
  const auto it = rows_.find(s);
  if (it == rows_.end()) {
    return {};
  }
  return it->second.q;
}

void QTable::for_each_entry(
    const std::function<void(const StateKey&, std::size_t, double)>& visit) const {
  for (const auto& [key, row] : rows_) {
    for (std::size_t a = 0; a < n_actions_; ++a) {
      if (row.written[a]) {
        visit(key, a, row.q[a]);
      }
    }
  }
}

// ---- policy ---------------------------------------------------------------

std::size_t greedy_action(const QTable& q, const StateKey& s, Rng& rng) {
  const std::size_t n = q.action_count();
  if (n == 0) {
    throw DomainError("empty action set");
  }
  const auto values = q.row(s);
  if (values.empty()) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }
  const double best = *std::max_element(values.begin(), values.end());
  std::size_t ties = 0;
  for (double v : values) {
    ties += v == best ? 1 : 0;
  }
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, ties - 1)(rng);
  for (std::size_t a = 0; a < n; ++a) {
    if (values[a] == best && pick-- == 0) {
      return a;
    }
  }
  return n - 1;  // unreachable
}

std::size_t select_action(const QTable& q, const StateKey& s, const ActionSet& actions,
                          double epsilon, Rng& rng) {
  if (actions.size() == 0) {
    throw DomainError("empty action set");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in [0, 1]");
  }
  const std::size_t greedy = greedy_action(q, s, rng);
  if (actions.size() == 1) {
    return greedy;
  }
  const bool explore = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon;
  if (!explore) {
    return greedy;
  }
  const std::size_t k = std::uniform_int_distribution<std::size_t>(0, actions.size() - 2)(rng);
  return k < greedy ? k : k + 1;
}

void update_q(QTable& q, const Experience& e, double learning_rate, double discount) {
  const double target = e.utility + discount * q.max_value(e.next_state);
  const double updated = (1.0 - learning_rate) * q.get(e.state, e.action) + learning_rate * target;
  q.set(e.state, e.action, updated);
}

double epsilon_at(std::size_t slot, const AgentConfig& config) {
  if (slot >= config.epsilon_decay_slots) {
    return config.epsilon_end;
  }
  const double t = static_cast<double>(slot) / static_cast<double>(config.epsilon_decay_slots);
  return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * t;
}

std::optional<std::size_t> warmup_policy(std::size_t slot, const AgentConfig& config,
                                         const ActionSet& actions, Rng& rng) {
  if (slot >= config.warmup_slots) {
    return std::nullopt;
  }
  return std::uniform_int_distribution<std::size_t>(0, actions.size() - 1)(rng);
}

// ---- RpicAgent ------------------------------------------------------------

RpicAgent::RpicAgent(AgentConfig config, ActionSet actions)
    : config_(config), actions_(std::move(actions)), q_(actions_.size()) {
  config_.validate();
  pool_.reserve(config_.max_slots);
}

std::size_t RpicAgent::act(const StateKey& s, std::size_t slot, Rng& rng) {
  if (auto a = warmup_policy(slot, config_, actions_, rng)) {
    return *a;
  }
  return select_action(q_, s, actions_, epsilon_at(slot, config_), rng);
}

void RpicAgent::learn(Experience e, Rng& rng) {
  update_q(q_, e, config_.learning_rate, config_.discount);
  pool_.push_back(std::move(e));
  if (!config_.replay) {
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
  for (std::size_t i = 0; i < config_.replay_batch; ++i) {
    update_q(q_, pool_[pick(rng)], config_.learning_rate, config_.discount);
  }
}

}  // namespace vlcudn
