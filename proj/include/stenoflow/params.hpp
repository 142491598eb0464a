#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "forcing.hpp"
#include "geometry.hpp"

namespace stenoflow {

/// Thrown for any parameter that violates its admissible range.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimensionless groups of the magneto-micropolar model. Defaults are the
/// reference blood-flow configuration.
struct DimensionlessParams {
  double K = 0.1;       // rotational-to-dynamic viscosity ratio
  double m = 0.1;       // spin-gradient material constant
  double J = 0.1;       // micro-gyration parameter
  double alpha = 3.0;   // Womersley number
  double H = 2.0;       // Hartmann number
  double Pr = 21.0;     // Prandtl number
  double Ec = 0.0002;   // Eckert number
  double fp = 1.2;      // pulse frequency, only used to rescale time for output
  StenosisShape shape;
  ForcingParams forcing;

  /// K == 0 switches off every micropolar coupling term.
  bool newtonian() const { return K == 0.0; }
};

struct NumericalParams {
  double dz = 0.05;
  double dxi = 0.025;
  double dt = 0.001;
  std::size_t M = 100;  // axial intervals, L/dz
  std::size_t N = 40;   // radial intervals, 1/dxi
  int warmup_periods = 3;
  int measure_periods = 1;

  /// Builds a grid for a tube of length L; throws if L/dz or 1/dxi is not integral.
  static NumericalParams make(double L, double dz, double dxi, double dt,
                              int warmup = 3, int measure = 1) {
    NumericalParams n;
    n.dz = dz;
    n.dxi = dxi;
    n.dt = dt;
    n.warmup_periods = warmup;
    n.measure_periods = measure;
    if (!(dz > 0.0) || !(dxi > 0.0) || !(dt > 0.0))
      throw ConfigError("dz, dxi and dt must be > 0");
    const double m = L / dz, nn = 1.0 / dxi;
    n.M = static_cast<std::size_t>(std::lround(m));
    n.N = static_cast<std::size_t>(std::lround(nn));
    if (std::abs(n.M * dz - L) > 1e-12 * std::max(1.0, L) || n.M < 2)
      throw ConfigError("dz = " + std::to_string(dz) + " does not divide L = " +
                        std::to_string(L) + " into at least 2 intervals");
    if (std::abs(n.N * dxi - 1.0) > 1e-12 || n.N < 3)
      throw ConfigError("dxi = " + std::to_string(dxi) +
                        " does not divide [0, 1] into at least 3 intervals");
    return n;
  }

  double xi(std::size_t j) const { return static_cast<double>(j) * dxi; }
  double z(std::size_t i) const { return static_cast<double>(i) * dz; }
};

/// Explicit-Euler diffusive limit of the axial momentum equation at the
/// narrowest radius the wall reaches.
inline double stability_limit(const DimensionlessParams& p, const NumericalParams& n) {
  const double rmin = min_radius(p.shape);
  return p.alpha * p.alpha * rmin * rmin * n.dxi * n.dxi / (2.0 * (1.0 + p.K));
}

/// Range checks on every physical parameter. Throws ConfigError naming the key.
inline void validate(const DimensionlessParams& p) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  const auto& s = p.shape;
  const auto& f = p.forcing;
  require(p.alpha > 0.0, "alpha must be > 0");
  require(p.H >= 0.0, "H must be >= 0");
  require(p.Pr > 0.0, "Pr must be > 0");
  require(p.Ec >= 0.0, "Ec must be >= 0");
  require(p.K >= 0.0, "K must be >= 0");
  require(p.J > 0.0, "J must be > 0");
  require(p.m >= 0.0, "m must be >= 0");
  require(p.K == 0.0 || p.m > 0.0, "m must be > 0 when K > 0");
  require(p.fp > 0.0, "fp must be > 0");
  require(s.Rbar > 0.0, "Rbar must be > 0");
  require(s.delta >= 0.0 && s.delta < s.Rbar, "delta must lie in [0, Rbar)");
  require(s.l0 > 0.0, "l0 must be > 0");
  require(s.d >= 0.0, "d must be >= 0");
  require(s.L > 0.0 && s.d + s.l0 <= s.L, "d + l0 must not exceed L");
  require(s.Kr >= 0.0 && s.Kr < 1.0, "Kr must lie in [0, 1)");
  require(f.a0 >= 0.0, "a0 must be >= 0");
  require(f.b > 0.0, "b must be > 0");
  require(f.Kbar > 0.0, "Kbar must be > 0");
  require(f.Kp >= 0.0, "Kp must be >= 0");
}

inline void validate(const DimensionlessParams& p, const NumericalParams& n) {
  validate(p);
  if (std::abs(n.M * n.dz - p.shape.L) > 1e-12 * std::max(1.0, p.shape.L))
    throw ConfigError("dz does not divide L");
  if (std::abs(n.N * n.dxi - 1.0) > 1e-12) throw ConfigError("dxi does not divide 1");
  if (n.warmup_periods < 0) throw ConfigError("warmup_periods must be >= 0");
  if (n.measure_periods < 1) throw ConfigError("measure_periods must be >= 1");
  const double limit = stability_limit(p, n);
  if (n.dt > limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "dt = %.6g exceeds the explicit stability limit dt_max = %.6g", n.dt,
                  limit);
    throw ConfigError(buf);
  }
}

}  // namespace stenoflow
