#pragma once

// Line-of-sight Lambertian channel between a ceiling AP and a photodiode.

#include <numbers>

namespace vlcudn {

// Plane angle. Stored in radians; degrees only at construction/printing.
class Angle {
 public:
  constexpr Angle() = default;
  static constexpr Angle radians(double r) { return Angle(r); }
  static constexpr Angle degrees(double d) { return Angle(d * std::numbers::pi / 180.0); }

  constexpr double rad() const { return rad_; }
  constexpr double deg() const { return rad_ * 180.0 / std::numbers::pi; }

  friend constexpr auto operator<=>(Angle, Angle) = default;

 private:
  constexpr explicit Angle(double r) : rad_(r) {}
  double rad_ = 0.0;
};

struct Pos3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Pos3&, const Pos3&) = default;
};

double horizontal_distance(const Pos3& a, const Pos3& b);
double distance(const Pos3& a, const Pos3& b);

struct ChannelParams {
  double detector_area_m2 = 1e-4;  // A_R
  Angle semi_angle = Angle::degrees(60.0);  // half-intensity semi-angle
  Angle fov = Angle::degrees(70.0);  // receiver field of view
  double responsivity = 0.54;  // eta, A/W

  // Table defaults use cm^2 and degrees.
  static ChannelParams from_table_units(double area_cm2, double semi_angle_deg, double fov_deg,
                                        double responsivity);

  // Throws DomainError on any violated invariant.
  void validate() const;
};

struct LinkGeometry {
  double distance = 0.0;  // m
  double irradiance_angle = 0.0;  // rad, at the AP
  double incidence_angle = 0.0;  // rad, at the photodiode
};

// m = -1 / log2(cos(semi_angle)). Throws DomainError outside (0, 90) degrees.
double lambertian_order(Angle semi_angle);

// AP faces straight down and the photodiode straight up, so both angles equal
// arccos(dz / d). Throws DegenerateGeometryError when ap.z <= ue.z.
LinkGeometry link_geometry(const Pos3& ap, const Pos3& ue);

// 1 when |incidence| <= fov (boundary inclusive), else 0.
int rect_fov(double incidence_angle, double fov_angle);

// h = (m+1) A_R / (2 pi d^2) cos^m(phi) cos(theta) rect(theta).
double channel_gain(const Pos3& ap, const Pos3& ue, const ChannelParams& params);

// Same as channel_gain with a precomputed Lambertian order; used in hot loops.
double channel_gain(const Pos3& ap, const Pos3& ue, const ChannelParams& params,
                    double lambertian_m);

}  // namespace vlcudn
