#pragma once
// Run orchestration: single runs, parameter sweeps, and their on-disk artifacts.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "simulation.hpp"

namespace stenoflow {

namespace fs = std::filesystem;

inline RunResult simulate(const RunConfig& c) {
  return simulate(c.params, c.numerics, SimulationOptions{c.outputs.cadence});
}

/// Writes config.resolved, profiles.csv, timeseries.csv, axial.csv,
/// summary.csv and report.txt into `dir`.
inline void write_artifacts(const RunResult& r, const RunConfig& c, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "config.resolved", std::ios::binary);
    out << to_text(c);
  }
  const double two_pi_fp = 2.0 * std::numbers::pi * r.params.fp;
  {
    csv::Writer w((dir / "profiles.csv").string(),
                  {"cycle", "phase", "t", "T", "xi", "u", "v", "w", "theta", "F"});
    for (const auto& p : r.profiles)
      for (std::size_t j = 0; j < p.xi.size(); ++j)
        w.row({static_cast<long>(p.cycle), kProfilePhases[p.phase_index], p.t, p.t / two_pi_fp,
               p.xi[j], p.u[j], p.v[j], p.w[j], p.theta[j], p.F[j]});
  }
  {
    csv::Writer w((dir / "timeseries.csv").string(),
                  {"t", "T", "Q", "tau_w", "Nu", "lambda_inst"});
    for (const auto& s : r.series)
      w.row({s.t, s.T, s.Q[r.throat], s.tau_w[r.throat], s.Nu[r.throat], s.lambda_inst});
  }
  {
    const auto& m = r.measured();
    csv::Writer w((dir / "axial.csv").string(), {"z", "R", "tau_w", "tau_w_peak", "Nu"});
    for (std::size_t i = 0; i <= r.numerics.M; ++i) {
      const double z = std::min(r.numerics.z(i), r.params.shape.L);
      w.row({z, detail::profile(r.params.shape, z), m.tau_mean_z[i], m.tau_peak_z[i],
             m.Nu_mean_z[i]});
    }
  }
  {
    csv::Writer w((dir / "summary.csv").string(),
                  {"cycle", "measured", "t_begin", "t_end", "Q_mean", "Q_peak", "Q_min",
                   "lambda_cycle", "tau_peak", "tau_min", "tau_peak_z", "F_peak", "Nu_max",
                   "periodicity_defect"});
    for (const auto& cy : r.cycles)
      w.row({static_cast<long>(cy.index), static_cast<long>(cy.index > r.numerics.warmup_periods),
             cy.t_begin, cy.t_end, cy.Q_mean, cy.Q_peak, cy.Q_min, cy.lambda_cycle, cy.peak_tau,
             cy.min_tau, cy.peak_tau_z, cy.peak_F, cy.max_Nu(), cy.periodicity_defect});
  }
  {
    std::ofstream out(dir / "report.txt", std::ios::binary);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "periodicity_defect = %.3e (%s 1e-3)\n"
                  "dt = %.6g\nstability_limit = %.6g\nstability_margin = %.3f\n"
                  "steps = %ld\ncycles = %zu (warm-up %d, measured %d)\n"
                  "throat_node = %zu\nwall_clock_s = %.3f\n",
                  r.periodicity_defect(), r.periodicity_defect() < 1e-3 ? "below" : "NOT below",
                  r.numerics.dt, r.stability_limit, r.stability_limit / r.numerics.dt, r.steps,
                  r.cycles.size(), r.numerics.warmup_periods, r.numerics.measure_periods,
                  r.throat, r.wall_seconds);
    out << buf;
  }
}

/// Executes one configuration and writes its artifact set.
inline RunResult run(const RunConfig& c, const fs::path& dir) {
  RunResult r = simulate(c);
  write_artifacts(r, c, dir);
  return r;
}

struct SweepPoint {
  std::size_t index = 0;
  RunConfig config;
  std::vector<double> values;  // one per sweep axis
  bool ok = false;
  bool diverged = false;
  std::string message;
  double Q_mean = 0.0, lambda_cycle = 0.0, peak_tau = 0.0, peak_tau_z = 0.0, max_Nu = 0.0,
         u_center_phase0 = 0.0;
};

inline std::string point_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%03zu", index);
  return buf;
}

/// Runs every sweep point on up to `config.workers` threads and writes one
/// artifact set per point plus sweep_summary.csv. A failing point is recorded
/// and does not stop the others. Without sweep axes this is `run`.
inline std::vector<SweepPoint> sweep(const RunConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<SweepPoint> points;
  for (auto& c : expand_sweep(config)) {
    SweepPoint p;
    p.index = points.size();
    for (const auto& axis : config.sweep) p.values.push_back(get_key(c, axis.key));
    p.config = std::move(c);
    points.push_back(std::move(p));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      SweepPoint& p = points[k];
      const fs::path sub = config.sweep.empty() ? dir : dir / point_dir_name(p.index);
      try {
        finalize(p.config);
        const RunResult r = run(p.config, sub);
        const auto& m = r.measured();
        p.Q_mean = m.Q_mean;
        p.lambda_cycle = m.lambda_cycle;
        p.peak_tau = m.peak_tau;
        p.peak_tau_z = m.peak_tau_z;
        p.max_Nu = m.max_Nu();
        p.u_center_phase0 = r.profile(0).u.front();
        p.ok = true;
      } catch (const DivergenceError& e) {
        p.diverged = true;
        p.message = e.what();
      } catch (const std::exception& e) {
        p.message = e.what();
      }
    }
  };
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(config.workers, 1)), points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!config.sweep.empty()) {
    std::ofstream out(dir / "config.resolved", std::ios::binary);
    out << to_text(config);
  }
  std::vector<std::string> header = {"point", "dir", "status"};
  for (const auto& axis : config.sweep) header.push_back(axis.key);
  for (const char* h : {"Q_mean", "lambda_cycle", "peak_tau", "peak_tau_z", "max_Nu",
                        "u_center_phase0", "message"})
    header.push_back(h);
  csv::Writer w((dir / "sweep_summary.csv").string(), header);
  for (const auto& p : points) {
    std::vector<csv::Cell> row = {static_cast<long>(p.index),
                                  config.sweep.empty() ? "." : point_dir_name(p.index),
                                  p.ok ? "ok" : (p.diverged ? "diverged" : "failed")};
    for (double v : p.values) row.emplace_back(v);
    for (double v : {p.Q_mean, p.lambda_cycle, p.peak_tau, p.peak_tau_z, p.max_Nu,
                     p.u_center_phase0})
      row.emplace_back(v);
    std::string msg = p.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    row.emplace_back(msg);
    w.row(row);
  }
  return points;
}

}  // namespace stenoflow
