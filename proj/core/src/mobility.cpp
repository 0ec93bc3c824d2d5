#include "vlcudn/mobility.hpp"

#include <algorithm>
#include <cmath>

#include "vlcudn/error.hpp"

namespace vlcudn {

namespace {

Pos3 uniform_point(const MobilityConfig& config, Rng& rng) {
  const Rect& b = config.cell_bounds;
  std::uniform_real_distribution<double> ux(b.x_min, b.x_max);
  std::uniform_real_distribution<double> uy(b.y_min, b.y_max);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y, config.ue_height};
}

double uniform_speed(const MobilityConfig& config, Rng& rng) {
  if (config.v_min == config.v_max) {
    return config.v_min;
  }
  return std::uniform_real_distribution<double>(config.v_min, config.v_max)(rng);
}

}  // namespace

void MobilityConfig::validate() const {
  if (!(v_min >= 0.0 && v_min <= v_max)) {
    throw DomainError("mobility speeds must satisfy 0 <= v_min <= v_max");
  }
  if (!(slot_duration > 0.0)) {
    throw DomainError("slot duration must be positive");
  }
  if (!(cell_bounds.x_max >= cell_bounds.x_min && cell_bounds.y_max >= cell_bounds.y_min)) {
    throw DomainError("cell bounds are inverted");
  }
}

std::vector<UeState> init_ues(std::size_t n, const MobilityConfig& config, Rng& rng,
                              ApId serving_ap) {
  if (n == 0) {
    throw DomainError("a cell needs at least one UE");
  }
  std::vector<UeState> ues(n);
  for (std::size_t i = 0; i < n; ++i) {
    ues[i].id = i;
    ues[i].position = uniform_point(config, rng);
    ues[i].waypoint = uniform_point(config, rng);
    ues[i].speed = uniform_speed(config, rng);
    ues[i].serving_ap = serving_ap;
  }
  return ues;
}

UeState rwp_step(UeState ue, const MobilityConfig& config, Rng& rng) {
  const double dx = ue.waypoint.x - ue.position.x;
  const double dy = ue.waypoint.y - ue.position.y;
  const double remaining = std::hypot(dx, dy);
  const double step = ue.speed * config.slot_duration;
  if (step >= remaining) {
    ue.position = ue.waypoint;
    ue.waypoint = uniform_point(config, rng);
    ue.speed = uniform_speed(config, rng);
    return ue;
  }
  const double f = step / remaining;
  const Rect& b = config.cell_bounds;
  // Convex combination of two in-bounds points; the clamp only absorbs rounding.
  ue.position.x = std::clamp(ue.position.x + f * dx, b.x_min, b.x_max);
  ue.position.y = std::clamp(ue.position.y + f * dy, b.y_min, b.y_max);
  ue.position.z = config.ue_height;
  return ue;
}

}  // namespace vlcudn
