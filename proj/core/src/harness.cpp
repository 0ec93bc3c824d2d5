#include "vlcudn/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vlcudn/error.hpp"

#ifndef VLCUDN_GIT_DESCRIBE
#define VLCUDN_GIT_DESCRIBE "unknown"
#endif

namespace vlcudn {

namespace {

enum class Stream : std::uint32_t { Mobility = 1, Agent = 2, Policy = 3 };

Rng make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

std::size_t foreign_count(const ExperimentConfig& c) {
  return c.interference.foreign_ues_per_neighbor == 0 ? c.density
                                                      : c.interference.foreign_ues_per_neighbor;
}

void require_finite(const SlotEvaluation& ev, std::size_t slot) {
  if (!std::isfinite(ev.utility) || !std::isfinite(ev.mean_rate_bps) ||
      !std::isfinite(ev.energy_w) || !std::isfinite(ev.ici_w)) {
    throw RuntimeAbort(fmt::format(
        "non-finite metric at slot {} (utility={}, mean_rate={}, energy={}, ici={})", slot,
        ev.utility, ev.mean_rate_bps, ev.energy_w, ev.ici_w));
  }
}

}  // namespace

// ---- environment ----------------------------------------------------------

CellEnvironment::CellEnvironment(const ExperimentConfig& config, Rng& rng)
    : config_(config),
      topology_(make_topology(config.topology.rows, config.topology.cols,
                              config.topology.spacing, config.topology.ap_height,
                              config.topology.mode, config.mobility.ue_height, config.channel)) {
  lambertian_m_ = lambertian_order(config_.channel.semi_angle);
  const Pos3& center = topology_.grid.ap_positions[topology_.center_ap];
  peak_gain_ = channel_gain(center, {center.x, center.y, config_.mobility.ue_height},
                            config_.channel, lambertian_m_);

  MobilityConfig central = config_.mobility;
  central.cell_bounds = topology_.grid.cell_of(topology_.center_ap);
  config_.mobility = central;
  ues_ = init_ues(config_.density, central, rng, topology_.center_ap);

  neighbors_ = topology_.neighbors_of_center();
  const std::size_t m = foreign_count(config_);
  for (ApId j : neighbors_) {
    MobilityConfig mc = central;
    mc.cell_bounds = topology_.grid.cell_of(j);
    neighbor_mobility_.push_back(mc);
    foreign_.push_back(m == 0 ? std::vector<UeState>{} : init_ues(m, mc, rng, j));
  }
}

void CellEnvironment::step(Rng& rng) {
  for (auto& ue : ues_) {
    ue = rwp_step(ue, config_.mobility, rng);
  }
  for (std::size_t j = 0; j < foreign_.size(); ++j) {
    for (auto& ue : foreign_[j]) {
      ue = rwp_step(ue, neighbor_mobility_[j], rng);
    }
  }
}

SlotChannelSnapshot CellEnvironment::snapshot() const {
  const auto& pos = topology_.grid.ap_positions;
  const Pos3& center = pos[topology_.center_ap];
  SlotChannelSnapshot snap;
  snap.serving_gains.reserve(ues_.size());
  snap.interferer_gains.reserve(ues_.size());
  for (const auto& ue : ues_) {
    snap.serving_gains.push_back(channel_gain(center, ue.position, config_.channel, lambertian_m_));
    std::vector<double> row;
    row.reserve(neighbors_.size());
    for (ApId j : neighbors_) {
      row.push_back(channel_gain(pos[j], ue.position, config_.channel, lambertian_m_));
    }
    snap.interferer_gains.push_back(std::move(row));
  }
  snap.outgoing_gains.reserve(foreign_.size());
  for (const auto& cell : foreign_) {
    std::vector<double> row;
    row.reserve(cell.size());
    for (const auto& ue : cell) {
      row.push_back(channel_gain(center, ue.position, config_.channel, lambertian_m_));
    }
    snap.outgoing_gains.push_back(std::move(row));
  }
  return snap;
}

PowerVector CellEnvironment::powers_for(std::span<const double> serving_w) const {
  PowerVector p;
  p.serving.assign(serving_w.begin(), serving_w.end());
  p.interferer.assign(serving_w.size(),
                      std::vector<double>(neighbors_.size(), config_.interference.neighbor_power_w));
  return p;
}

StateQuantizer make_quantizer(const ExperimentConfig& config, double peak_gain) {
  StateQuantizer q;
  q.rate_bins = config.quantization.rate_bins;
  q.gain_bins = config.quantization.gain_bins;
  q.rate_max_bps = per_ue_bandwidth(config.link, config.density) *
                   std::log2(1.0 + config.quantization.sinr_cap);
  q.gain_max = peak_gain;
  return q;
}

// ---- baselines ------------------------------------------------------------

std::size_t baseline_policy(Policy policy, const BaselineContext& ctx, Rng& rng) {
  const ActionSet& actions = *ctx.actions;
  switch (policy) {
    case Policy::FixedMax:
      return actions.size() - 1;
    case Policy::FixedHalf: {
      const std::size_t levels = actions.levels().size() - 1;
      // Nearest level to X_max/2 is index L/2; odd L ties round up.
      const std::size_t half = (levels + 1) / 2;
      const std::vector<std::size_t> idx(actions.ue_count(), half);
      return actions.index_of(idx);
    }
    case Policy::Random:
      return std::uniform_int_distribution<std::size_t>(0, actions.size() - 1)(rng);
    case Policy::GreedyMyopic: {
      const ExperimentConfig& c = *ctx.config;
      std::size_t best = 0;
      double best_u = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < actions.size(); ++a) {
        const auto powers = ctx.environment->powers_for(actions.powers(a));
        const double u =
            evaluate_slot(powers, *ctx.snapshot, c.link, c.channel.responsivity, c.weights).utility;
        if (u > best_u) {
          best_u = u;
          best = a;
        }
      }
      return best;
    }
    case Policy::Rpic:
      break;
  }
  throw DomainError("RPIC is not a baseline policy");
}

// ---- episode --------------------------------------------------------------

std::vector<SlotMetrics> run_episode(const ExperimentConfig& config, std::uint64_t seed,
                                     const EpisodeHooks& hooks) {
  config.validate();
  Rng mobility_rng = make_rng(seed, Stream::Mobility);
  Rng agent_rng = make_rng(seed, Stream::Agent);
  Rng policy_rng = make_rng(seed, Stream::Policy);

  CellEnvironment env(config, mobility_rng);
  const StateQuantizer quantizer = make_quantizer(config, env.peak_gain());
  ActionSet actions(config.agent.power_levels, config.agent.max_power_w, config.density,
                    config.agent.action_cap);

  std::optional<RpicAgent> agent;
  if (config.policy == Policy::Rpic) {
    agent.emplace(config.agent, actions);
    if (hooks.warm_start != nullptr) {
      if (hooks.warm_start->action_count() != actions.size()) {
        throw ConfigError("warm-start Q-table action count does not match this configuration");
      }
      agent->q() = *hooks.warm_start;
    }
  }

  const std::size_t n_slots = config.agent.max_slots;
  std::vector<SlotMetrics> out;
  out.reserve(n_slots);
  std::vector<double> prev_rates(config.density, 0.0);
  std::optional<Experience> pending;
  SlotChannelSnapshot snap;

  for (std::size_t k = 0; k < n_slots; ++k) {
    if (k > 0) {
      env.step(mobility_rng);
    }
    if (hooks.on_positions) {
      hooks.on_positions(k, env.ues());
    }
    snap = env.snapshot();
    StateKey state = quantizer.quantize(prev_rates, snap.serving_gains, config.density);

    std::size_t action = 0;
    if (agent) {
      if (pending) {
        pending->next_state = state;
        agent->learn(std::move(*pending), agent_rng);
        pending.reset();
      }
      action = agent->act(state, k, agent_rng);
    } else {
      action = baseline_policy(config.policy, {&actions, &snap, &env, &config}, policy_rng);
    }

    const std::vector<double> serving = actions.powers(action);
    const SlotEvaluation ev = evaluate_slot(env.powers_for(serving), snap, config.link,
                                            config.channel.responsivity, config.weights);
    require_finite(ev, k);
    out.push_back({k, ev.utility, ev.mean_rate_bps, ev.energy_w, ev.ici_w});

    if (hooks.on_slot) {
      hooks.on_slot({k, prev_rates, snap.serving_gains, state, action, serving, ev});
    }
    if (agent) {
      pending = Experience{std::move(state), action, ev.utility, {}};
    }
    prev_rates = ev.rates_bps;
  }

  if (agent && pending) {
    // No slot K_max exists; the successor state reuses the last channel.
    pending->next_state = quantizer.quantize(prev_rates, snap.serving_gains, config.density);
    agent->learn(std::move(*pending), agent_rng);
  }
  if (agent && hooks.final_q != nullptr) {
    *hooks.final_q = agent->q();
  }
  return out;
}

// ---- experiments ----------------------------------------------------------

RunSeries run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks) {
  config.validate();
  const std::size_t runs = config.runs;
  std::vector<std::vector<SlotMetrics>> results(runs);

  std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::max<std::size_t>(1, std::min(threads, runs));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs) {
        return;
      }
      try {
        EpisodeHooks eh;
        eh.warm_start = hooks.warm_start;
        eh.final_q = i == 0 ? hooks.first_run_q : nullptr;
        results[i] = run_episode(config, config.seed + i, eh);
        if (hooks.on_run) {
          hooks.on_run(i, results[i]);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(runs);
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  // Fixed summation order keeps the mean independent of the thread count.
  RunSeries series;
  const std::size_t n_slots = results.front().size();
  series.slots.resize(n_slots);
  for (std::size_t k = 0; k < n_slots; ++k) {
    SlotMetrics& m = series.slots[k];
    m.slot = k;
    for (const auto& run : results) {
      m.utility += run[k].utility;
      m.mean_rate_bps += run[k].mean_rate_bps;
      m.energy_w += run[k].energy_w;
      m.ici_w += run[k].ici_w;
    }
    const double r = static_cast<double>(runs);
    m.utility /= r;
    m.mean_rate_bps /= r;
    m.energy_w /= r;
    m.ici_w /= r;
  }
  series.meta = {config_hash(config), config.seed, runs, config.density, config.policy};
  return series;
}

std::vector<RunSeries> sweep_density(const ExperimentConfig& config,
                                     std::span<const std::size_t> densities) {
  if (densities.empty()) {
    throw ConfigError("density list is empty");
  }
  std::vector<RunSeries> out;
  out.reserve(densities.size());
  for (std::size_t n : densities) {
    ExperimentConfig c = config;
    c.density = n;
    // Surface the action-space cap before any run starts.
    try {
      ActionSet(c.agent.power_levels, c.agent.max_power_w, n, c.agent.action_cap);
    } catch (const DomainError& e) {
      throw ConfigError(fmt::format("density {}: {}", n, e.what()));
    }
    out.push_back(run_experiment(c));
  }
  return out;
}

double window_mean(const RunSeries& series, double SlotMetrics::*field, std::size_t first,
                   std::size_t last) {
  last = std::min(last, series.slots.size());
  if (first >= last) {
    throw DomainError("empty slot window");
  }
  double sum = 0.0;
  for (std::size_t k = first; k < last; ++k) {
    sum += series.slots[k].*field;
  }
  return sum / static_cast<double>(last - first);
}

CalibrationReport calibrate_weights(const ExperimentConfig& config, double fraction,
                                    std::size_t samples, std::uint64_t seed) {
  config.validate();
  if (samples == 0 || !(fraction > 0.0)) {
    throw DomainError("calibration needs samples >= 1 and fraction > 0");
  }
  Rng rng = make_rng(seed, Stream::Mobility);
  const std::vector<double> half(config.density, config.agent.max_power_w / 2.0);
  CalibrationReport rep;
  rep.density = config.density;
  rep.fraction = fraction;
  for (std::size_t i = 0; i < samples; ++i) {
    CellEnvironment env(config, rng);
    const auto ev = evaluate_slot(env.powers_for(half), env.snapshot(), config.link,
                                  config.channel.responsivity, UtilityWeights{});
    rep.mean_rate_mbps += ev.mean_rate_bps / kBpsPerMbps;
    rep.energy_w += ev.energy_w;
    rep.ici_w += ev.ici_w;
  }
  const double s = static_cast<double>(samples);
  rep.mean_rate_mbps /= s;
  rep.energy_w /= s;
  rep.ici_w /= s;
  rep.suggested.energy_weight = fraction * rep.mean_rate_mbps / rep.energy_w;
  rep.suggested.interference_weight =
      rep.ici_w > 0.0 ? fraction * rep.mean_rate_mbps / rep.ici_w : 0.0;
  return rep;
}

// ---- output ---------------------------------------------------------------

void write_csv(std::ostream& out, std::span<const SlotMetrics> slots) {
  out << "slot,utility,mean_rate_bps,energy_w,ici_w\n";
  for (const auto& m : slots) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", m.slot, m.utility,
                       m.mean_rate_bps, m.energy_w, m.ici_w);
  }
}

void write_csv(const std::filesystem::path& path, std::span<const SlotMetrics> slots) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open '" + path.string() + "' for writing");
  }
  write_csv(out, slots);
}

std::string_view build_version() { return VLCUDN_GIT_DESCRIBE; }

void write_metadata(const std::filesystem::path& path, const ExperimentConfig& config,
                    const RunMetadata& meta) {
  nlohmann::ordered_json j;
  j["policy"] = std::string(to_string(meta.policy));
  j["density"] = meta.density;
  j["runs"] = meta.runs;
  j["seed"] = meta.seed;
  j["run_seeds"] = fmt::format("seed + i for i in [0, {})", meta.runs);
  j["config_hash"] = fmt::format("{:016x}", meta.config_hash);
  j["build"] = std::string(build_version());
  j["slots"] = config.agent.max_slots;
  j["notes"] = {
      "one frame is treated as one time slot",
      "baseline policies are simple stand-ins, not a reproduction of any published benchmark",
      "utility = mean rate [Mbps] - C_E * energy [W] - C_I * ICI [W]",
  };
  j["config_ini"] = to_ini(config);
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open '" + path.string() + "' for writing");
  }
  out << j.dump(2) << '\n';
}

}  // namespace vlcudn
