#pragma once
// Explicit finite-difference stepping of the transformed magneto-micropolar
// system on the (z, xi) grid, xi = r / R(z, t).

#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "forcing.hpp"
#include "geometry.hpp"
#include "params.hpp"

namespace stenoflow {

/// Raised when a field leaves the overflow guard or becomes non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long step, double t, std::size_t i, std::size_t j, std::string field,
                  double value)
      : std::runtime_error(format(step, t, i, j, field, value)),
        step(step), t(t), i(i), j(j), field(std::move(field)), value(value) {}

  long step;
  double t;
  std::size_t i, j;
  std::string field;
  double value;

 private:
  static std::string format(long step, double t, std::size_t i, std::size_t j,
                            const std::string& field, double value) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "divergence in %s at step %ld (t = %.6g), node (i=%zu, j=%zu): %g",
                  field.c_str(), step, t, i, j, value);
    return buf;
  }
};

inline constexpr double kOverflowGuard = 1e6;

/// Rest start with theta = xi^2, which meets both thermal boundary conditions.
inline FlowField init_state(const DimensionlessParams&, const NumericalParams& n) {
  FlowField s;
  s.u = Field2D(n.M + 1, n.N + 1, 0.0);
  s.v = Field2D(n.M + 1, n.N + 1, 0.0);
  s.w = Field2D(n.M + 1, n.N + 1, 0.0);
  s.theta = Field2D(n.M + 1, n.N + 1, 0.0);
  for (std::size_t i = 0; i <= n.M; ++i) {
    for (std::size_t j = 0; j < n.N; ++j) s.theta(i, j) = n.xi(j) * n.xi(j);
    s.theta(i, n.N) = 1.0;
  }
  s.t = 0.0;
  s.step = 0;
  return s;
}

namespace detail {

// Radial convection velocity in transformed coordinates divided by R:
// [xi (R_t + u R_z) - v] / R.
inline double transport(double xi, double u, double v, const WallState& w) {
  return (xi * (w.dRdt + u * w.dRdz) - v) / w.R;
}

}  // namespace detail

/// Axial momentum update at interior nodes (1 <= i <= M-1, 1 <= j <= N-1).
/// Reads only level-k data; `out` must be sized like `cur.u`.
inline void step_axial(const FlowField& cur, const DimensionlessParams& p,
                       const NumericalParams& n, std::span<const WallState> wall,
                       Field2D& out) {
  const double a2 = p.alpha * p.alpha;
  const double forcing = body_accel(p.forcing, cur.t) + pressure_gradient(p.forcing, cur.t);
  const double h2 = p.H * p.H;
  const double inv2dxi = 1.0 / (2.0 * n.dxi), invdxi2 = 1.0 / (n.dxi * n.dxi);
  const double inv2dz = 1.0 / (2.0 * n.dz);
  const bool coupled = !p.newtonian();
  for (std::size_t i = 1; i < n.M; ++i) {
    const WallState& ws = wall[i];
    const auto u = cur.u.row(i), um = cur.u.row(i - 1), up = cur.u.row(i + 1);
    const auto v = cur.v.row(i), w = cur.w.row(i);
    const auto next = out.row(i);
    const double diff = (1.0 + p.K) / (a2 * ws.R * ws.R);
    const double couple = p.K / (a2 * ws.R);
    for (std::size_t j = 1; j < n.N; ++j) {
      const double xi = n.xi(j);
      const double du = (u[j + 1] - u[j - 1]) * inv2dxi;
      const double d2u = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * invdxi2;
      const double duz = (up[j] - um[j]) * inv2dz;
      double rhs = du * detail::transport(xi, u[j], v[j], ws) - u[j] * duz +
                   diff * (d2u + du / xi);
      if (coupled) rhs += couple * ((w[j + 1] - w[j - 1]) * inv2dxi + w[j] / xi);
      rhs += (forcing - h2 * u[j]) / a2;
      next[j] = u[j] + n.dt * rhs;
    }
  }
}

/// Microrotation update at interior nodes.
inline void step_microrotation(const FlowField& cur, const DimensionlessParams& p,
                               const NumericalParams& n, std::span<const WallState> wall,
                               Field2D& out) {
  const double a2J = p.alpha * p.alpha * p.J;
  const double inv2dxi = 1.0 / (2.0 * n.dxi), invdxi2 = 1.0 / (n.dxi * n.dxi);
  const double inv2dz = 1.0 / (2.0 * n.dz);
  for (std::size_t i = 1; i < n.M; ++i) {
    const WallState& ws = wall[i];
    const auto u = cur.u.row(i), v = cur.v.row(i), vm = cur.v.row(i - 1),
               vp = cur.v.row(i + 1);
    const auto w = cur.w.row(i), wm = cur.w.row(i - 1), wp = cur.w.row(i + 1);
    const auto next = out.row(i);
    const double vortex = p.K / a2J;
    const double shear = p.K / (a2J * ws.R);
    const double diff = p.m / (a2J * ws.R * ws.R);
    for (std::size_t j = 1; j < n.N; ++j) {
      const double xi = n.xi(j);
      const double dw = (w[j + 1] - w[j - 1]) * inv2dxi;
      const double d2w = (w[j + 1] - 2.0 * w[j] + w[j - 1]) * invdxi2;
      const double dwz = (wp[j] - wm[j]) * inv2dz;
      const double du = (u[j + 1] - u[j - 1]) * inv2dxi;
      const double dv = (v[j + 1] - v[j - 1]) * inv2dxi;
      const double dvz = (vp[j] - vm[j]) * inv2dz;
      const double rhs = dw * detail::transport(xi, u[j], v[j], ws) - u[j] * dwz -
                         vortex * (2.0 * w[j] - dvz) - shear * (du + xi * ws.dRdz * dv) +
                         diff * (d2w + dw / xi - w[j] / (xi * xi));
      next[j] = w[j] + n.dt * rhs;
    }
  }
}

/// Energy update at interior nodes, with Joule heating Ec H^2 u^2 / alpha^2.
inline void step_temperature(const FlowField& cur, const DimensionlessParams& p,
                             const NumericalParams& n, std::span<const WallState> wall,
                             Field2D& out) {
  const double a2 = p.alpha * p.alpha;
  const double joule = p.Ec * p.H * p.H / a2;
  const double inv2dxi = 1.0 / (2.0 * n.dxi), invdxi2 = 1.0 / (n.dxi * n.dxi);
  const double inv2dz = 1.0 / (2.0 * n.dz);
  for (std::size_t i = 1; i < n.M; ++i) {
    const WallState& ws = wall[i];
    const auto u = cur.u.row(i), v = cur.v.row(i);
    const auto th = cur.theta.row(i), thm = cur.theta.row(i - 1),
               thp = cur.theta.row(i + 1);
    const auto next = out.row(i);
    const double cond = 1.0 / (a2 * p.Pr * ws.R * ws.R);
    for (std::size_t j = 1; j < n.N; ++j) {
      const double xi = n.xi(j);
      const double dth = (th[j + 1] - th[j - 1]) * inv2dxi;
      const double d2th = (th[j + 1] - 2.0 * th[j] + th[j - 1]) * invdxi2;
      const double dthz = (thp[j] - thm[j]) * inv2dz;
      const double rhs = dth * detail::transport(xi, u[j], v[j], ws) - u[j] * dthz +
                         cond * (d2th + dth / xi) + joule * u[j] * u[j];
      next[j] = th[j] + n.dt * rhs;
    }
  }
}

/// Radial velocity from the continuity closure,
/// v = xi [u R_z + (2 - xi^2) R_t], at every node.
inline void update_radial(FlowField& s, const NumericalParams& n,
                          std::span<const WallState> wall) {
  for (std::size_t i = 0; i <= n.M; ++i) {
    const WallState& ws = wall[i];
    const auto u = s.u.row(i);
    const auto v = s.v.row(i);
    for (std::size_t j = 0; j <= n.N; ++j) {
      const double xi = n.xi(j);
      v[j] = xi * (u[j] * ws.dRdz + (2.0 - xi * xi) * ws.dRdt);
    }
  }
}

/// Centreline: v = w = 0 and second-order zero-slope closure for u and theta.
inline void apply_axis_bc(FlowField& s, const NumericalParams& n) {
  for (std::size_t i = 0; i <= n.M; ++i) {
    s.u(i, 0) = (4.0 * s.u(i, 1) - s.u(i, 2)) / 3.0;
    s.theta(i, 0) = (4.0 * s.theta(i, 1) - s.theta(i, 2)) / 3.0;
    s.v(i, 0) = 0.0;
    s.w(i, 0) = 0.0;
  }
}

/// Wall: no slip, no spin, theta = 1, and v following the wall.
inline void apply_wall_bc(FlowField& s, const NumericalParams& n,
                          std::span<const WallState> wall) {
  for (std::size_t i = 0; i <= n.M; ++i) {
    s.u(i, n.N) = 0.0;
    s.w(i, n.N) = 0.0;
    s.theta(i, n.N) = 1.0;
    s.v(i, n.N) = wall[i].dRdt;
  }
}

/// Zero axial gradient at inlet and outlet for u, w and theta.
inline void apply_axial_boundary(FlowField& s, const NumericalParams& n) {
  for (Field2D* f : {&s.u, &s.w, &s.theta}) {
    for (std::size_t j = 0; j <= n.N; ++j) {
      (*f)(0, j) = (*f)(1, j);
      (*f)(n.M, j) = (*f)(n.M - 1, j);
    }
  }
}

/// Throws DivergenceError at the first entry that is non-finite or beyond the guard.
inline void check_finite(const Field2D& f, const char* name, long step, double t) {
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const auto r = f.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!std::isfinite(r[j]) || std::abs(r[j]) > kOverflowGuard)
        throw DivergenceError(step, t, i, j, name, r[j]);
    }
  }
}

/// Reusable per-run scratch space so `advance` does not allocate.
struct StepWorkspace {
  std::vector<WallState> wall_now;
  std::vector<WallState> wall_next;
  FlowField next;
};

/// Advances one time step. The three transport updates are Jacobi-style: each
/// reads only level-k data.
inline void advance(FlowField& s, const DimensionlessParams& p, const NumericalParams& n,
                    StepWorkspace& ws) {
  if (ws.wall_now.size() != n.M + 1) {
    ws.wall_now.resize(n.M + 1);
    ws.wall_next.resize(n.M + 1);
  }
  if (ws.next.u.rows() != s.u.rows() || ws.next.u.cols() != s.u.cols()) ws.next = s;

  evaluate_wall(p.shape, n.dz, s.t, ws.wall_now);

  FlowField& nx = ws.next;
  step_axial(s, p, n, ws.wall_now, nx.u);
  step_microrotation(s, p, n, ws.wall_now, nx.w);
  step_temperature(s, p, n, ws.wall_now, nx.theta);

  nx.step = s.step + 1;
  nx.t = s.t + n.dt;
  evaluate_wall(p.shape, n.dz, nx.t, ws.wall_next);

  apply_axial_boundary(nx, n);
  apply_axis_bc(nx, n);
  apply_wall_bc(nx, n, ws.wall_next);
  update_radial(nx, n, ws.wall_next);

  check_finite(nx.u, "u", nx.step, nx.t);
  check_finite(nx.w, "w", nx.step, nx.t);
  check_finite(nx.theta, "theta", nx.step, nx.t);
  check_finite(nx.v, "v", nx.step, nx.t);

  std::swap(s, nx);
}

inline void advance(FlowField& s, const DimensionlessParams& p, const NumericalParams& n) {
  StepWorkspace ws;
  advance(s, p, n, ws);
}

/// Residual of the integrand-matched continuity relation
/// du/dz - 4 (xi^2 - 1) R_t / R + 2 R_z u / R at every node.
inline Field2D continuity_residual(const FlowField& s, const NumericalParams& n,
                                   std::span<const WallState> wall) {
  Field2D r(n.M + 1, n.N + 1, 0.0);
  for (std::size_t i = 0; i <= n.M; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i == n.M ? n.M : i + 1;
    const double span = static_cast<double>(hi - lo) * n.dz;
    const WallState& ws = wall[i];
    for (std::size_t j = 0; j <= n.N; ++j) {
      const double xi = n.xi(j);
      const double duz = (s.u(hi, j) - s.u(lo, j)) / span;
      r(i, j) = duz - 4.0 * (xi * xi - 1.0) * ws.dRdt / ws.R + 2.0 * ws.dRdz * s.u(i, j) / ws.R;
    }
  }
  return r;
}

}  // namespace stenoflow
