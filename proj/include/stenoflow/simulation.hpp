#pragma once
// Time-marching driver: warm-up plus measured periods, throat profiles at fixed
// phases, and cycle statistics.

#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "diagnostics.hpp"
#include "field.hpp"
#include "params.hpp"
#include "solver.hpp"

namespace stenoflow {

/// Phases (t mod 2 pi) at which throat profiles are recorded.
inline constexpr std::array<double, 4> kProfilePhases = {
    0.0, 0.5 * std::numbers::pi, std::numbers::pi, 1.5 * std::numbers::pi};

struct ProfileSnapshot {
  int cycle = 0;        // 1-based measured cycle
  int phase_index = 0;  // into kProfilePhases
  double t = 0.0;
  std::vector<double> xi, u, v, w, theta, F;
};

struct RunResult {
  DimensionlessParams params;
  NumericalParams numerics;
  std::size_t throat = 0;
  double stability_limit = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
  std::vector<CycleStats> cycles;  // every cycle, warm-up included
  std::vector<DiagnosticsSample> series;  // measured periods only
  std::vector<ProfileSnapshot> profiles;  // measured periods only
  FlowField final_state;

  const CycleStats& measured() const { return cycles.back(); }
  double periodicity_defect() const { return cycles.back().periodicity_defect; }

  const ProfileSnapshot& profile(int phase_index, int cycle = 1) const {
    for (const auto& p : profiles)
      if (p.cycle == cycle && p.phase_index == phase_index) return p;
    throw std::out_of_range("no profile recorded for the requested phase");
  }
};

/// Index of the axial node nearest the throat.
inline std::size_t throat_index(const DimensionlessParams& p, const NumericalParams& n) {
  const auto i = static_cast<std::size_t>(std::lround(p.shape.throat() / n.dz));
  return std::min(i, n.M);
}

struct SimulationOptions {
  int cadence = 10;  // sample stride in steps for the stored time series
};

/// Runs warm-up plus measured periods from a rest start. Throws
/// DivergenceError if the fields blow up.
inline RunResult simulate(const DimensionlessParams& p, const NumericalParams& n,
                          const SimulationOptions& opt = {}) {
  const auto started = std::chrono::steady_clock::now();
  validate(p, n);

  RunResult res;
  res.params = p;
  res.numerics = n;
  res.throat = throat_index(p, n);
  res.stability_limit = stability_limit(p, n);

  const double period = 2.0 * std::numbers::pi;
  const int total = n.warmup_periods + n.measure_periods;
  const double measure_from = period * n.warmup_periods;

  FlowField state = init_state(p, n);
  FlowField prev = state;
  StepWorkspace ws;
  std::vector<WallState> wall_prev(n.M + 1), wall_cur(n.M + 1);
  DiagnosticsCollector collector(p, n, res.throat, opt.cadence, measure_from);

  // Next profile target, as (cycle, phase) in measured-period numbering.
  int prof_cycle = 1, prof_phase = 0;
  auto target_time = [&] {
    return measure_from + period * (prof_cycle - 1) + kProfilePhases[prof_phase];
  };

  while (static_cast<int>(collector.cycles().size()) < total) {
    prev = state;
    evaluate_wall(p.shape, n.dz, state.t, wall_prev);
    advance(state, p, n, ws);
    evaluate_wall(p.shape, n.dz, state.t, wall_cur);
    collector.collect(prev, state, wall_prev, wall_cur);

    if (prof_cycle <= n.measure_periods && state.t >= target_time() - 1e-12) {
      ProfileSnapshot snap;
      snap.cycle = prof_cycle;
      snap.phase_index = prof_phase;
      snap.t = state.t;
      const std::size_t i = res.throat;
      for (std::size_t j = 0; j <= n.N; ++j) snap.xi.push_back(n.xi(j));
      const auto row = [&](const Field2D& f) {
        return std::vector<double>(f.row(i).begin(), f.row(i).end());
      };
      snap.u = row(state.u);
      snap.v = row(state.v);
      snap.w = row(state.w);
      snap.theta = row(state.theta);
      snap.F = fluid_accel_profile(prev, state, wall_prev, n, i);
      res.profiles.push_back(std::move(snap));
      if (++prof_phase == static_cast<int>(kProfilePhases.size())) {
        prof_phase = 0;
        ++prof_cycle;
      }
    }
  }

  res.steps = state.step;
  res.cycles = collector.cycles();
  res.series = collector.series();
  res.final_state = std::move(state);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

}  // namespace stenoflow
