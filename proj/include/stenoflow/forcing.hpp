#pragma once

#include <cmath>

namespace stenoflow {

struct ForcingParams {
  double a0 = 1.0;     // body-acceleration amplitude
  double b = 1.0;      // body-acceleration frequency relative to the pulse
  double phi_g = 0.0;  // body-acceleration phase
  double Kbar = 7.30;  // steady part of -dp/dz
  double Kp = 1.46;    // pulsatile part of -dp/dz
};

/// Periodic body acceleration G(t).
inline double body_accel(const ForcingParams& f, double t) {
  return f.a0 * std::cos(f.b * t + f.phi_g);
}

/// Returns -dp/dz, uniform along the tube. Positive drives flow towards +z.
inline double pressure_gradient(const ForcingParams& f, double t) {
  return f.Kbar + f.Kp * std::cos(t);
}

}  // namespace stenoflow
