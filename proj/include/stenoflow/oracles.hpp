#pragma once
// Reference solutions that do not share code paths with the stepping scheme:
// closed-form steady pipe flows and Richardson order estimates.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "diagnostics.hpp"
#include "params.hpp"
#include "simulation.hpp"
#include "solver.hpp"

namespace stenoflow {

/// Modified Bessel function I0 by its power series, summed until the next
/// term falls below `rel_tol` of the partial sum.
inline double bessel_i0(double x, double rel_tol = 1e-12, int* terms_used = nullptr) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  int k = 0;
  while (term > rel_tol * sum) {
    ++k;
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (k > 500) break;
  }
  if (terms_used) *terms_used = k + 1;
  return sum;
}

struct SteadyProfile {
  std::vector<double> xi;
  std::vector<double> u;
  double Kbar = 0.0;
  double H = 0.0;
};

/// Steady Newtonian pipe flow u = (Kbar/4)(1 - xi^2).
inline SteadyProfile poiseuille(double Kbar, std::span<const double> xi) {
  if (!(Kbar > 0.0)) throw std::invalid_argument("poiseuille: Kbar must be > 0");
  SteadyProfile s{{xi.begin(), xi.end()}, {}, Kbar, 0.0};
  for (double x : xi) s.u.push_back(0.25 * Kbar * (1.0 - x * x));
  return s;
}

/// Steady Hartmann pipe flow u = (Kbar/H^2)[1 - I0(H xi)/I0(H)].
inline SteadyProfile hartmann_pipe(double Kbar, double H, std::span<const double> xi) {
  if (!(H > 0.0)) throw std::invalid_argument("hartmann_pipe: H must be > 0");
  SteadyProfile s{{xi.begin(), xi.end()}, {}, Kbar, H};
  const double wall = bessel_i0(H);
  for (double x : xi) s.u.push_back(Kbar / (H * H) * (1.0 - bessel_i0(H * x) / wall));
  return s;
}

inline std::vector<double> uniform_xi(std::size_t N) {
  std::vector<double> xi(N + 1);
  for (std::size_t j = 0; j <= N; ++j) xi[j] = static_cast<double>(j) / static_cast<double>(N);
  return xi;
}

struct SteadyRun {
  SteadyProfile profile;  // numerical profile at the mid-tube node
  double Q = 0.0;         // flow rate at the same node
  long steps = 0;
  bool converged = false;
  FlowField state;
};

/// Marches a rigid straight tube under constant forcing until the per-step
/// change of u drops below `tol` in the max norm, or the step budget runs out.
inline SteadyRun steady_runner(const DimensionlessParams& p, const NumericalParams& n,
                               double tol = 1e-10, long max_steps = 2'000'000) {
  const auto& f = p.forcing;
  const auto& s = p.shape;
  if (f.a0 != 0.0 || f.Kp != 0.0 || s.Kr != 0.0 || s.delta != 0.0)
    throw std::invalid_argument(
        "steady_runner needs a0 = Kp = Kr = delta = 0 (constant forcing, rigid straight tube)");
  validate(p, n);

  SteadyRun out;
  FlowField state = init_state(p, n);
  StepWorkspace ws;
  std::vector<double> before;
  while (out.steps < max_steps) {
    before.assign(state.u.values().begin(), state.u.values().end());
    advance(state, p, n, ws);
    ++out.steps;
    double change = 0.0;
    const auto after = state.u.values();
    for (std::size_t k = 0; k < after.size(); ++k)
      change = std::max(change, std::abs(after[k] - before[k]));
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  const std::size_t mid = n.M / 2;
  out.profile.xi = uniform_xi(n.N);
  out.profile.u.assign(state.u.row(mid).begin(), state.u.row(mid).end());
  out.profile.Kbar = f.Kbar;
  out.profile.H = p.H;
  out.Q = flow_rate(state.u.row(mid), s.Rbar, n.dxi);
  out.state = std::move(state);
  return out;
}

/// Observed order log(|q0 - q1| / |q1 - q2|) / log(ratio) from three levels,
/// coarse to fine. Empty when either difference is at round-off level.
inline std::optional<double> observed_order(double coarse, double mid, double fine,
                                            double ratio = 2.0) {
  const double e1 = std::abs(coarse - mid), e2 = std::abs(mid - fine);
  const double floor = 1e-13 * std::max({std::abs(coarse), std::abs(mid), std::abs(fine), 1.0});
  if (e1 <= floor || e2 <= floor) return std::nullopt;
  return std::log(e1 / e2) / std::log(ratio);
}

struct RefinementStudy {
  std::vector<double> spacing;  // dxi (space) or dt (time) per level
  std::vector<double> Q;
  std::vector<double> u_center;
  std::optional<double> order_Q;
  std::optional<double> order_u;
};

namespace detail {
inline void finish(RefinementStudy& r) {
  const std::size_t k = r.Q.size();
  if (k < 3) return;
  r.order_Q = observed_order(r.Q[k - 3], r.Q[k - 2], r.Q[k - 1]);
  r.order_u = observed_order(r.u_center[k - 3], r.u_center[k - 2], r.u_center[k - 1]);
}
}  // namespace detail

/// Halves dz and dxi per level (dt by four, keeping the diffusion number) and
/// compares converged steady solutions.
inline RefinementStudy refine_space_steady(const DimensionlessParams& p,
                                           const NumericalParams& base, int levels) {
  if (levels < 3) throw std::invalid_argument("refinement needs at least 3 levels");
  RefinementStudy r;
  double dz = base.dz, dxi = base.dxi, dt = base.dt;
  for (int l = 0; l < levels; ++l) {
    const auto n = NumericalParams::make(p.shape.L, dz, dxi, dt);
    const auto run = steady_runner(p, n);
    if (!run.converged) throw std::runtime_error("refinement level did not converge");
    r.spacing.push_back(dxi);
    r.Q.push_back(run.Q);
    r.u_center.push_back(run.profile.u.front());
    dz *= 0.5;
    dxi *= 0.5;
    dt *= 0.25;
  }
  detail::finish(r);
  return r;
}

/// Halves dt per level on a fixed grid and compares throat flow rate and
/// centreline velocity at `t_end` (which must be a whole number of coarse steps).
inline RefinementStudy refine_time(const DimensionlessParams& p, const NumericalParams& base,
                                   int levels, double t_end) {
  if (levels < 3) throw std::invalid_argument("refinement needs at least 3 levels");
  validate(p, base);
  RefinementStudy r;
  const std::size_t throat = throat_index(p, base);
  double dt = base.dt;
  for (int l = 0; l < levels; ++l) {
    NumericalParams n = base;
    n.dt = dt;
    const long steps = std::lround(t_end / dt);
    if (std::abs(static_cast<double>(steps) * dt - t_end) > 1e-9 * t_end)
      throw std::invalid_argument("t_end is not a whole number of steps");
    FlowField s = init_state(p, n);
    StepWorkspace ws;
    for (long k = 0; k < steps; ++k) advance(s, p, n, ws);
    const auto wall = evaluate_wall(p.shape, n.dz, s.t, n.M + 1);
    r.spacing.push_back(dt);
    r.Q.push_back(flow_rate(s, wall, n, throat));
    r.u_center.push_back(s.u(throat, 0));
    dt *= 0.5;
  }
  detail::finish(r);
  return r;
}

}  // namespace stenoflow
