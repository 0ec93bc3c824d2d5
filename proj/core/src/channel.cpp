#include "vlcudn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vlcudn/error.hpp"

namespace vlcudn {

double horizontal_distance(const Pos3& a, const Pos3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double distance(const Pos3& a, const Pos3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ChannelParams ChannelParams::from_table_units(double area_cm2, double semi_angle_deg,
                                              double fov_deg, double responsivity) {
  ChannelParams p;
  p.detector_area_m2 = area_cm2 * 1e-4;
  p.semi_angle = Angle::degrees(semi_angle_deg);
  p.fov = Angle::degrees(fov_deg);
  p.responsivity = responsivity;
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (!(detector_area_m2 > 0.0)) {
    throw DomainError("detector area must be positive");
  }
  if (!(semi_angle.deg() > 0.0 && semi_angle.deg() < 90.0)) {
    throw DomainError("half-intensity semi-angle must lie in (0, 90) degrees, got " +
                      std::to_string(semi_angle.deg()));
  }
  if (!(fov.deg() > 0.0 && fov.deg() <= 90.0)) {
    throw DomainError("field of view must lie in (0, 90] degrees, got " +
                      std::to_string(fov.deg()));
  }
  if (!(responsivity > 0.0)) {
    throw DomainError("photodiode responsivity must be positive");
  }
}

double lambertian_order(Angle semi_angle) {
  const double deg = semi_angle.deg();
  if (!(deg > 0.0 && deg < 90.0)) {
    throw DomainError("Lambertian order undefined for semi-angle " + std::to_string(deg) +
                      " deg");
  }
  return -1.0 / std::log2(std::cos(semi_angle.rad()));
}

LinkGeometry link_geometry(const Pos3& ap, const Pos3& ue) {
  const double dz = ap.z - ue.z;
  if (!(dz > 0.0)) {
    throw DegenerateGeometryError("AP must be strictly above the receiver plane");
  }
  LinkGeometry g;
  g.distance = distance(ap, ue);
  const double angle = std::acos(std::min(1.0, dz / g.distance));
  g.irradiance_angle = angle;
  g.incidence_angle = angle;
  return g;
}

int rect_fov(double incidence_angle, double fov_angle) {
  return std::abs(incidence_angle) <= fov_angle ? 1 : 0;
}

double channel_gain(const Pos3& ap, const Pos3& ue, const ChannelParams& params,
                    double lambertian_m) {
  const LinkGeometry g = link_geometry(ap, ue);
  if (rect_fov(g.incidence_angle, params.fov.rad()) == 0) {
    return 0.0;
  }
  const double d2 = g.distance * g.distance;
  return (lambertian_m + 1.0) * params.detector_area_m2 / (2.0 * std::numbers::pi * d2) *
         std::pow(std::cos(g.irradiance_angle), lambertian_m) * std::cos(g.incidence_angle);
}

double channel_gain(const Pos3& ap, const Pos3& ue, const ChannelParams& params) {
  return channel_gain(ap, ue, params, lambertian_order(params.semi_angle));
}

}  // namespace vlcudn
