#pragma once
// Derived quantities: flow rate, wall shear stress, Nusselt number, fluid
// acceleration, flow resistance, and per-cycle statistics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "forcing.hpp"
#include "geometry.hpp"
#include "params.hpp"

namespace stenoflow {

class DegenerateCycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 2 pi R^2 times the trapezoidal integral of xi u over [0, 1].
inline double flow_rate(std::span<const double> u, double R, double dxi) {
  const std::size_t N = u.size() - 1;
  // xi_0 = 0 drops the axis endpoint.
  double sum = 0.5 * static_cast<double>(N) * dxi * u[N];
  for (std::size_t j = 1; j < N; ++j) sum += static_cast<double>(j) * dxi * u[j];
  return 2.0 * std::numbers::pi * R * R * sum * dxi;
}

inline double flow_rate(const FlowField& s, std::span<const WallState> wall,
                        const NumericalParams& n, std::size_t i) {
  return flow_rate(s.u.row(i), wall[i].R, n.dxi);
}

/// -(1 + K)/R du/dxi at the wall, second-order one-sided. Positive for forward flow.
inline double wall_shear(std::span<const double> u, double R, double K, double dxi) {
  const std::size_t N = u.size() - 1;
  const double slope = (3.0 * u[N] - 4.0 * u[N - 1] + u[N - 2]) / (2.0 * dxi);
  return -(1.0 + K) * slope / R;
}

inline double wall_shear(const FlowField& s, std::span<const WallState> wall,
                         const DimensionlessParams& p, const NumericalParams& n,
                         std::size_t i) {
  return wall_shear(s.u.row(i), wall[i].R, p.K, n.dxi);
}

/// First-order wall temperature gradient over R^2 (unit reference radius).
inline double nusselt(std::span<const double> theta, double R, double dxi) {
  const std::size_t N = theta.size() - 1;
  return (theta[N] - theta[N - 1]) / dxi / (R * R);
}

inline double nusselt(const FlowField& s, std::span<const WallState> wall,
                      const NumericalParams& n, std::size_t i) {
  return nusselt(s.theta.row(i), wall[i].R, n.dxi);
}

/// Material acceleration of the axial flow between levels k (`prev`, with its
/// wall state) and k+1 (`cur`):
///   (u' - u)/dt + u du/dz - (xi/R)(R_t + u R_z) du/dxi.
/// Axial derivatives fall back to one-sided at the tube ends and the radial
/// derivative to second-order one-sided at the wall.
inline double fluid_accel(const FlowField& prev, const FlowField& cur,
                          std::span<const WallState> wall_prev, const NumericalParams& n,
                          std::size_t i, std::size_t j) {
  const Field2D& u = prev.u;
  const double dt = cur.t - prev.t;
  const std::size_t lo = i == 0 ? 0 : i - 1;
  const std::size_t hi = i == n.M ? n.M : i + 1;
  const double duz = (u(hi, j) - u(lo, j)) / (static_cast<double>(hi - lo) * n.dz);
  double dux = 0.0;
  if (j == n.N)
    dux = (3.0 * u(i, j) - 4.0 * u(i, j - 1) + u(i, j - 2)) / (2.0 * n.dxi);
  else if (j > 0)
    dux = (u(i, j + 1) - u(i, j - 1)) / (2.0 * n.dxi);
  const double xi = n.xi(j);
  const WallState& ws = wall_prev[i];
  return (cur.u(i, j) - u(i, j)) / dt + u(i, j) * duz -
         xi / ws.R * (ws.dRdt + u(i, j) * ws.dRdz) * dux;
}

inline std::vector<double> fluid_accel_profile(const FlowField& prev, const FlowField& cur,
                                               std::span<const WallState> wall_prev,
                                               const NumericalParams& n, std::size_t i) {
  std::vector<double> F(n.N + 1);
  for (std::size_t j = 0; j <= n.N; ++j) F[j] = fluid_accel(prev, cur, wall_prev, n, i, j);
  return F;
}

/// Instantaneous resistance |L dp/dz| / Q; infinite when Q vanishes.
inline double flow_resistance(double length, double pressure_grad, double Q) {
  if (Q == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(length * pressure_grad) / Q;
}

struct CycleStats {
  int index = 0;  // 1-based
  double t_begin = 0.0, t_end = 0.0;
  long samples = 0;

  // At the throat node.
  double Q_mean = 0.0, Q_peak = -std::numeric_limits<double>::infinity(),
         Q_min = std::numeric_limits<double>::infinity();
  double peak_tau = -std::numeric_limits<double>::infinity(),
         min_tau = std::numeric_limits<double>::infinity();
  double peak_F = 0.0;  // max |F| over the throat profile and the cycle
  double lambda_cycle = std::numeric_limits<double>::quiet_NaN();

  // Along the tube.
  double peak_tau_z = -std::numeric_limits<double>::infinity();
  std::vector<double> tau_mean_z, tau_peak_z, Nu_mean_z;

  double periodicity_defect = std::numeric_limits<double>::quiet_NaN();

  double tau_amplitude() const { return 0.5 * (peak_tau - min_tau); }
  double max_Nu() const {
    return Nu_mean_z.empty() ? 0.0 : *std::max_element(Nu_mean_z.begin(), Nu_mean_z.end());
  }
};

/// Cycle-averaged resistance L Kbar / Q_mean.
inline double flow_resistance_cycle(const CycleStats& c, const DimensionlessParams& p) {
  if (!(c.Q_mean > 0.0))
    throw DegenerateCycleError("cycle " + std::to_string(c.index) +
                               ": mean flow rate is not positive");
  return p.shape.L * p.forcing.Kbar / c.Q_mean;
}

/// Largest relative change of Q_mean, Q_peak and peak_tau between two cycles.
inline double periodicity_defect(const CycleStats& a, const CycleStats& b) {
  auto rel = [](double x, double y) {
    const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
    return std::abs(x - y) / scale;
  };
  return std::max({rel(a.Q_mean, b.Q_mean), rel(a.Q_peak, b.Q_peak),
                   rel(a.peak_tau, b.peak_tau)});
}

struct DiagnosticsSample {
  double t = 0.0;
  double T = 0.0;  // t / (2 pi fp)
  std::vector<double> Q, tau_w, Nu;
  double lambda_inst = 0.0;  // at the throat
  std::vector<double> F;     // throat profile
};

/// Accumulates samples every `cadence` steps and closes a cycle each time t
/// crosses a multiple of 2 pi.
class DiagnosticsCollector {
 public:
  DiagnosticsCollector(const DimensionlessParams& p, const NumericalParams& n,
                       std::size_t throat, int cadence = 1, double keep_after = 0.0)
      : p_(p), n_(n), throat_(throat), cadence_(std::max(cadence, 1)),
        keep_after_(keep_after) {
    open_cycle(0.0);
  }

  /// Call once per step with the levels before and after it. `wall_prev` and
  /// `wall_cur` are the wall states at prev.t and cur.t.
  void collect(const FlowField& prev, const FlowField& cur,
               std::span<const WallState> wall_prev, std::span<const WallState> wall_cur) {
    const std::size_t nodes = n_.M + 1;
    Q_.resize(nodes);
    tau_.resize(nodes);
    Nu_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      Q_[i] = flow_rate(cur, wall_cur, n_, i);
      tau_[i] = wall_shear(cur, wall_cur, p_, n_, i);
      Nu_[i] = nusselt(cur, wall_cur, n_, i);
    }
    F_ = fluid_accel_profile(prev, cur, wall_prev, n_, throat_);

    CycleStats& c = open_;
    const double q = Q_[throat_];
    c.samples += 1;
    q_sum_ += q;
    c.Q_peak = std::max(c.Q_peak, q);
    c.Q_min = std::min(c.Q_min, q);
    c.peak_tau = std::max(c.peak_tau, tau_[throat_]);
    c.min_tau = std::min(c.min_tau, tau_[throat_]);
    for (double f : F_) c.peak_F = std::max(c.peak_F, std::abs(f));
    for (std::size_t i = 0; i < nodes; ++i) {
      c.tau_mean_z[i] += tau_[i];
      c.Nu_mean_z[i] += Nu_[i];
      c.tau_peak_z[i] = std::max(c.tau_peak_z[i], tau_[i]);
      c.peak_tau_z = std::max(c.peak_tau_z, tau_[i]);
    }

    if (cur.step % cadence_ == 0 && cur.t >= keep_after_) {
      DiagnosticsSample s;
      s.t = cur.t;
      s.T = cur.t / (2.0 * std::numbers::pi * p_.fp);
      s.Q = Q_;
      s.tau_w = tau_;
      s.Nu = Nu_;
      s.lambda_inst =
          flow_resistance(p_.shape.L, pressure_gradient(p_.forcing, cur.t), q);
      s.F = F_;
      series_.push_back(std::move(s));
    }

    if (cur.t >= cycle_end_ - 1e-12 * cycle_end_) close_cycle(cur.t);
  }

  const std::vector<DiagnosticsSample>& series() const { return series_; }
  const std::vector<CycleStats>& cycles() const { return cycles_; }
  std::size_t throat() const { return throat_; }

 private:
  void open_cycle(double t) {
    open_ = CycleStats{};
    open_.index = static_cast<int>(cycles_.size()) + 1;
    open_.t_begin = t;
    const std::size_t nodes = n_.M + 1;
    open_.tau_mean_z.assign(nodes, 0.0);
    open_.Nu_mean_z.assign(nodes, 0.0);
    open_.tau_peak_z.assign(nodes, -std::numeric_limits<double>::infinity());
    q_sum_ = 0.0;
    cycle_end_ = 2.0 * std::numbers::pi * static_cast<double>(open_.index);
  }

  void close_cycle(double t) {
    CycleStats& c = open_;
    c.t_end = t;
    const double inv = 1.0 / static_cast<double>(c.samples);
    c.Q_mean = q_sum_ * inv;
    for (auto& x : c.tau_mean_z) x *= inv;
    for (auto& x : c.Nu_mean_z) x *= inv;
    c.lambda_cycle = c.Q_mean > 0.0 ? flow_resistance_cycle(c, p_)
                                    : std::numeric_limits<double>::quiet_NaN();
    if (!cycles_.empty()) c.periodicity_defect = periodicity_defect(cycles_.back(), c);
    cycles_.push_back(std::move(c));
    open_cycle(t);
  }

  DimensionlessParams p_;
  NumericalParams n_;
  std::size_t throat_;
  long cadence_;
  double keep_after_;
  CycleStats open_;
  double q_sum_ = 0.0;
  double cycle_end_ = 0.0;
  std::vector<CycleStats> cycles_;
  std::vector<DiagnosticsSample> series_;
  std::vector<double> Q_, tau_, Nu_, F_;
};

}  // namespace stenoflow
