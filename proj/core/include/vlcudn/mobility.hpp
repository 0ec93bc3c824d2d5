#pragma once

// Random-waypoint motion confined to one cell.

#include <cstddef>
#include <random>
#include <vector>

#include "vlcudn/channel.hpp"
#include "vlcudn/topology.hpp"

namespace vlcudn {

using Rng = std::mt19937_64;

struct MobilityConfig {
  double v_min = 0.1;  // m/s
  double v_max = 1.0;  // m/s
  double slot_duration = 0.1;  // s
  double ue_height = 1.0;  // m
  Rect cell_bounds;

  void validate() const;
};

struct UeState {
  std::size_t id = 0;
  Pos3 position;
  Pos3 waypoint;
  double speed = 0.0;
  ApId serving_ap = 0;
};

// n UEs at independent uniform positions, each with a uniform waypoint and a
// speed uniform in [v_min, v_max]. Throws DomainError when n == 0.
std::vector<UeState> init_ues(std::size_t n, const MobilityConfig& config, Rng& rng,
                              ApId serving_ap = 0);

// Moves speed * slot_duration toward the waypoint. If that reaches or passes
// the waypoint, the UE stops on it and draws a new waypoint and speed.
UeState rwp_step(UeState ue, const MobilityConfig& config, Rng& rng);

}  // namespace vlcudn
