#pragma once
// Stenosed, radially oscillating tube wall.

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stenoflow {

/// Cosine-bump stenosis on a tube whose radius oscillates in time.
/// All lengths are in units of the unconstricted radius.
struct StenosisShape {
  double Rbar = 1.0;   // mean radius
  double delta = 0.25; // stenosis depth
  double d = 2.0;      // upstream offset of the bump
  double l0 = 1.0;     // bump length
  double Kr = 0.05;    // wall-motion amplitude
  double phi_r = 0.0;  // wall-motion phase
  double L = 5.0;      // tube length

  double throat() const { return d + 0.5 * l0; }
};

/// Wall radius and its derivatives at one axial node.
struct WallState {
  double R = 1.0;
  double dRdz = 0.0;
  double dRdt = 0.0;
};

namespace detail {

inline void check_axial(const StenosisShape& s, double z) {
  if (!(z >= 0.0 && z <= s.L))
    throw std::domain_error("axial coordinate " + std::to_string(z) +
                            " outside [0, " + std::to_string(s.L) + "]");
}

inline bool in_bump(const StenosisShape& s, double z) {
  return z > s.d && z < s.d + s.l0;
}

inline double bump_phase(const StenosisShape& s, double z) {
  return 2.0 * std::numbers::pi / s.l0 * (z - s.d - 0.5 * s.l0);
}

// Time-independent profile Rbar * [1 - delta/2 (1 + cos(.))].
inline double profile(const StenosisShape& s, double z) {
  if (!in_bump(s, z)) return s.Rbar;
  return s.Rbar * (1.0 - 0.5 * s.delta * (1.0 + std::cos(bump_phase(s, z))));
}

inline double profile_dz(const StenosisShape& s, double z) {
  if (!in_bump(s, z)) return 0.0;
  return s.Rbar * s.delta * std::numbers::pi / s.l0 * std::sin(bump_phase(s, z));
}

}  // namespace detail

inline double radius(const StenosisShape& s, double z, double t) {
  detail::check_axial(s, z);
  return detail::profile(s, z) * (1.0 + s.Kr * std::sin(t + s.phi_r));
}

inline double radius_dz(const StenosisShape& s, double z, double t) {
  detail::check_axial(s, z);
  return detail::profile_dz(s, z) * (1.0 + s.Kr * std::sin(t + s.phi_r));
}

inline double radius_dt(const StenosisShape& s, double z, double t) {
  detail::check_axial(s, z);
  return detail::profile(s, z) * s.Kr * std::cos(t + s.phi_r);
}

/// Smallest radius the wall ever reaches.
inline double min_radius(const StenosisShape& s) {
  return (s.Rbar - s.delta) * (1.0 - s.Kr);
}

inline WallState wall_state(const StenosisShape& s, double z, double t) {
  detail::check_axial(s, z);
  const double motion = 1.0 + s.Kr * std::sin(t + s.phi_r);
  const double rate = s.Kr * std::cos(t + s.phi_r);
  const double p = detail::profile(s, z);
  return {p * motion, detail::profile_dz(s, z) * motion, p * rate};
}

/// Fills `out` with the wall state at nodes z_i = i*dz, i = 0..out.size()-1.
/// The last node is clamped onto z = L to absorb rounding in M*dz.
inline void evaluate_wall(const StenosisShape& s, double dz, double t,
                          std::span<WallState> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double z = std::min(static_cast<double>(i) * dz, s.L);
    out[i] = wall_state(s, z, t);
  }
}

inline std::vector<WallState> evaluate_wall(const StenosisShape& s, double dz, double t,
                                            std::size_t nodes) {
  std::vector<WallState> out(nodes);
  evaluate_wall(s, dz, t, out);
  return out;
}

}  // namespace stenoflow
