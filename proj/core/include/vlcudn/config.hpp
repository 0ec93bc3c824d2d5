#pragma once

// Experiment configuration and its INI-style file form.
//
// Sections mirror the struct below: [topology] [channel] [link] [interference]
// [mobility] [agent] [state] [utility] [experiment]. Every key has a default;
// unknown sections or keys are rejected. Powers are written in mW, angles in
// degrees, detector area in cm^2.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "vlcudn/channel.hpp"
#include "vlcudn/link_metrics.hpp"
#include "vlcudn/mobility.hpp"
#include "vlcudn/rl_agent.hpp"
#include "vlcudn/topology.hpp"

namespace vlcudn {

enum class Policy { Rpic, FixedMax, FixedHalf, Random, GreedyMyopic };

std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view text);  // throws ConfigError

struct TopologyConfig {
  std::size_t rows = 5;
  std::size_t cols = 5;
  double spacing = 2.0;
  double ap_height = 3.0;
  SpectrumMode mode = SpectrumMode::FourBlock;
};

// Neighbor cells are not learning agents: each transmits a fixed power to each
// of its own active UEs.
struct InterferenceConfig {
  double neighbor_power_w = 2e-3;
  std::size_t foreign_ues_per_neighbor = 0;  // 0 = same as the central density
};

struct QuantizationConfig {
  std::size_t rate_bins = 4;
  std::size_t gain_bins = 4;
  double sinr_cap = 1e7;  // upper rate-grid edge is W_n log2(1 + sinr_cap)
};

struct ExperimentConfig {
  TopologyConfig topology;
  ChannelParams channel;
  LinkParams link;
  InterferenceConfig interference;
  MobilityConfig mobility;  // cell_bounds is derived from the topology
  AgentConfig agent;
  QuantizationConfig quantization;
  // Calibrated at density 3: each penalty term is 0.4x the mean-rate term at X_max/2.
  UtilityWeights weights{495.9, 1.901e8};
  std::size_t density = 3;
  Policy policy = Policy::Rpic;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;  // 0 = hardware concurrency

  // Throws ConfigError describing the first violated invariant.
  void validate() const;
};

ExperimentConfig default_config();

// Throws ConfigError for syntax errors, unknown keys, bad values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical INI text of a resolved config; parse_config(to_ini(c)) == c.
std::string to_ini(const ExperimentConfig& config);

// FNV-1a of to_ini(config).
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace vlcudn
