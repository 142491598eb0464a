#pragma once
// Release gate: analytic oracles and solver invariants, reported line by line.

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "solver.hpp"

namespace stenoflow {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

inline DimensionlessParams steady_params(double H) {
  DimensionlessParams p;
  p.forcing.a0 = 0.0;
  p.forcing.Kp = 0.0;
  p.shape.Kr = 0.0;
  p.shape.delta = 0.0;
  p.K = 0.0;
  p.H = H;
  return p;
}

inline double max_rel_error(const SteadyProfile& num, const SteadyProfile& exact) {
  double err = 0.0;
  for (std::size_t j = 0; j < num.u.size(); ++j)
    err = std::max(err, std::abs(num.u[j] - exact.u[j]));
  return err / exact.u.front();
}

inline std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace detail

inline ValidationReport run_validation(std::ostream* log = nullptr) {
  ValidationReport rep;
  auto check = [&](std::string name, const std::function<CheckResult()>& body) {
    CheckResult r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.name = std::move(name);
    if (log) *log << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    rep.checks.push_back(std::move(r));
  };

  check("bessel I0 series", [] {
    int terms = 0;
    bessel_i0(10.0, 1e-12, &terms);
    const bool ok = bessel_i0(0.0) == 1.0 && terms <= 40;
    return CheckResult{{}, ok, detail::fmt("I0(0) = %.17g, %g terms at x = 10", bessel_i0(0.0), terms)};
  });

  check("wall derivatives vs finite differences", [] {
    StenosisShape s;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> zd(0.01, s.L - 0.01), td(0.0, 20.0);
    double worst = 0.0;
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
      const double z = zd(rng), t = td(rng);
      const double fz = (radius(s, z + h, t) - radius(s, z - h, t)) / (2 * h);
      const double ft = (radius(s, z, t + h) - radius(s, z, t - h)) / (2 * h);
      worst = std::max({worst, std::abs(fz - radius_dz(s, z, t)), std::abs(ft - radius_dt(s, z, t))});
    }
    return CheckResult{{}, worst < 1e-7, detail::fmt("max deviation %.3e", worst)};
  });

  const auto grid = NumericalParams::make(5.0, 0.05, 0.025, 0.001);

  check("steady Poiseuille limit (N = 40)", [&] {
    const auto p = detail::steady_params(0.0);
    const auto run = steady_runner(p, grid);
    const double err = detail::max_rel_error(run.profile, poiseuille(p.forcing.Kbar, run.profile.xi));
    return CheckResult{{}, run.converged && err < 5e-3,
                       detail::fmt("max-norm error %.3e of centreline, u(0) = %.6f", err, run.profile.u[0])};
  });

  check("steady Hartmann limit H = 2 (N = 40)", [&] {
    const auto p = detail::steady_params(2.0);
    const auto run = steady_runner(p, grid);
    const double err =
        detail::max_rel_error(run.profile, hartmann_pipe(p.forcing.Kbar, 2.0, run.profile.xi));
    return CheckResult{{}, run.converged && err < 1e-2,
                       detail::fmt("max-norm error %.3e of centreline, u(0) = %.6f", err, run.profile.u[0])};
  });

  check("spatial order, steady Newtonian flow rate", [] {
    auto p = detail::steady_params(0.0);
    p.shape.L = 0.2;
    p.shape.d = 0.0;
    p.shape.l0 = 0.1;
    const auto study = refine_space_steady(p, NumericalParams::make(0.2, 0.05, 0.1, 0.004), 3);
    const double order = study.order_Q.value_or(0.0);
    return CheckResult{{}, std::abs(order - 2.0) < 0.2, detail::fmt("observed order %.4f", order)};
  });

  check("divergence probe at 4x the stability limit (expected failure)", [&] {
    DimensionlessParams p;
    NumericalParams n = grid;
    n.dt = 4.0 * stability_limit(p, n);
    FlowField s = init_state(p, n);
    StepWorkspace ws;
    try {
      for (int k = 0; k < 5000; ++k) advance(s, p, n, ws);
    } catch (const DivergenceError& e) {
      return CheckResult{{}, true, std::string("detected: ") + e.what()};
    }
    return CheckResult{{}, false, "no divergence within 5000 steps"};
  });

  check("boundary conditions after every step", [&] {
    DimensionlessParams p;
    FlowField s = init_state(p, grid);
    StepWorkspace ws;
    for (int k = 0; k < 200; ++k) {
      advance(s, p, grid, ws);
      const auto wall = evaluate_wall(p.shape, grid.dz, s.t, grid.M + 1);
      for (std::size_t i = 0; i <= grid.M; ++i) {
        const std::size_t N = grid.N;
        const bool ok = s.u(i, N) == 0.0 && s.w(i, N) == 0.0 && s.theta(i, N) == 1.0 &&
                        s.v(i, N) == wall[i].dRdt && s.v(i, 0) == 0.0 && s.w(i, 0) == 0.0 &&
                        s.u(i, 0) == (4.0 * s.u(i, 1) - s.u(i, 2)) / 3.0 &&
                        s.theta(i, 0) == (4.0 * s.theta(i, 1) - s.theta(i, 2)) / 3.0;
        if (!ok) return CheckResult{{}, false, detail::fmt("violated at step %g, node %g", k + 1.0, double(i))};
      }
    }
    return CheckResult{{}, true, "200 steps, all eight equalities exact"};
  });

  check("Newtonian reduction independent of m, J and w", [&] {
    DimensionlessParams a;
    a.K = 0.0;
    DimensionlessParams b = a;
    b.m = 0.37;
    b.J = 0.9;
    FlowField sa = init_state(a, grid), sb = init_state(b, grid);
    for (auto& x : sb.w.values()) x = 0.01;
    StepWorkspace wa, wb;
    for (int k = 0; k < 100; ++k) {
      advance(sa, a, grid, wa);
      advance(sb, b, grid, wb);
    }
    const bool ok = sa.u == sb.u && sa.theta == sb.theta;
    return CheckResult{{}, ok, ok ? "u and theta bitwise identical" : "trajectories differ"};
  });

  return rep;
}

}  // namespace stenoflow
