#pragma once

// Episode loop, Monte-Carlo averaging, baselines and density sweeps.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "vlcudn/config.hpp"
#include "vlcudn/link_metrics.hpp"
#include "vlcudn/mobility.hpp"
#include "vlcudn/rl_agent.hpp"
#include "vlcudn/topology.hpp"

namespace vlcudn {

struct SlotMetrics {
  std::size_t slot = 0;
  double utility = 0.0;
  double mean_rate_bps = 0.0;
  double energy_w = 0.0;
  double ici_w = 0.0;
};

struct RunMetadata {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::size_t density = 0;
  Policy policy = Policy::Rpic;
};

struct RunSeries {
  std::vector<SlotMetrics> slots;  // element-wise mean over runs
  RunMetadata meta;
};

// Geometry of one run: the central cell's UEs, the UEs of every co-channel
// neighbor cell, and the gains between them at the current positions.
class CellEnvironment {
 public:
  CellEnvironment(const ExperimentConfig& config, Rng& rng);

  void step(Rng& rng);
  SlotChannelSnapshot snapshot() const;
  PowerVector powers_for(std::span<const double> serving_w) const;

  const CellTopology& topology() const { return topology_; }
  const std::vector<UeState>& ues() const { return ues_; }
  const std::vector<std::vector<UeState>>& foreign_ues() const { return foreign_; }
  // Serving gain at zero horizontal offset; top of the gain quantization grid.
  double peak_gain() const { return peak_gain_; }

 private:
  ExperimentConfig config_;
  CellTopology topology_;
  std::vector<ApId> neighbors_;
  std::vector<MobilityConfig> neighbor_mobility_;
  std::vector<UeState> ues_;
  std::vector<std::vector<UeState>> foreign_;
  double lambertian_m_ = 1.0;
  double peak_gain_ = 0.0;
};

StateQuantizer make_quantizer(const ExperimentConfig& config, double peak_gain);

struct BaselineContext {
  const ActionSet* actions = nullptr;
  const SlotChannelSnapshot* snapshot = nullptr;
  const CellEnvironment* environment = nullptr;
  const ExperimentConfig* config = nullptr;
};

// FixedMax: all X_max. FixedHalf: the level nearest X_max/2 (ties round up).
// Random: uniform. GreedyMyopic: exhaustive argmax of the current-slot utility
// (lowest index on ties). Throws DomainError for Policy::Rpic.
std::size_t baseline_policy(Policy policy, const BaselineContext& context, Rng& rng);

// Everything the harness knows at the end of one slot.
struct SlotTrace {
  std::size_t slot = 0;
  std::vector<double> previous_rates_bps;  // r^(k-1), zero at k = 0
  std::vector<double> gains;  // h^(k)
  StateKey state;
  std::size_t action = 0;
  std::vector<double> powers_w;
  SlotEvaluation evaluation;
};

struct EpisodeHooks {
  std::function<void(const SlotTrace&)> on_slot;
  std::function<void(std::size_t slot, const std::vector<UeState>&)> on_positions;
  const QTable* warm_start = nullptr;  // copied into the agent before slot 0
  QTable* final_q = nullptr;  // receives the agent's table after the last slot
};

// Exactly agent.max_slots slots. Slot k: move UEs (k > 0), measure the channel,
// quantize (r^(k-1), h^(k), N), apply the pending Q-update of slot k-1 whose
// next state is now known, choose x^(k), evaluate, record. Throws RuntimeAbort
// on a non-finite metric.
std::vector<SlotMetrics> run_episode(const ExperimentConfig& config, std::uint64_t seed,
                                     const EpisodeHooks& hooks = {});

struct ExperimentHooks {
  // Called once per finished run with (run index, per-run series); may be
  // called from worker threads, in any order.
  std::function<void(std::size_t, const std::vector<SlotMetrics>&)> on_run;
  const QTable* warm_start = nullptr;
  QTable* first_run_q = nullptr;
};

// Mean over config.runs episodes seeded seed + i. Results do not depend on
// config.threads.
RunSeries run_experiment(const ExperimentConfig& config, const ExperimentHooks& hooks = {});

std::vector<RunSeries> sweep_density(const ExperimentConfig& config,
                                     std::span<const std::size_t> densities);

// Mean of a metric over slots [first, last).
double window_mean(const RunSeries& series, double SlotMetrics::*field, std::size_t first,
                   std::size_t last);

// Magnitudes of the three utility terms with every UE (and neighbor) at X_max/2,
// averaged over random placements; basis for choosing C_E and C_I.
struct CalibrationReport {
  std::size_t density = 0;
  double mean_rate_mbps = 0.0;
  double energy_w = 0.0;
  double ici_w = 0.0;
  double fraction = 0.0;
  UtilityWeights suggested;  // each penalty term = fraction * rate term
};

CalibrationReport calibrate_weights(const ExperimentConfig& config, double fraction,
                                    std::size_t samples, std::uint64_t seed);

// "slot,utility,mean_rate_bps,energy_w,ici_w" with 17 significant digits.
void write_csv(std::ostream& out, std::span<const SlotMetrics> slots);
void write_csv(const std::filesystem::path& path, std::span<const SlotMetrics> slots);

// JSON sidecar: resolved config, seed, runs, hash, build version, notes.
void write_metadata(const std::filesystem::path& path, const ExperimentConfig& config,
                    const RunMetadata& meta);

std::string_view build_version();

}  // namespace vlcudn
