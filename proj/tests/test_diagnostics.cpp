#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "stenoflow/diagnostics.hpp"
#include "stenoflow/oracles.hpp"
#include "stenoflow/solver.hpp"

using namespace stenoflow;

namespace {

std::vector<double> sampled(std::size_t N, double (*f)(double)) {
  std::vector<double> v(N + 1);
  for (std::size_t j = 0; j <= N; ++j) v[j] = f(static_cast<double>(j) / N);
  return v;
}

std::vector<double> poiseuille_samples(std::size_t N) {
  return sampled(N, [](double x) { return 7.30 / 4 * (1 - x * x); });
}

DimensionlessParams steady_newtonian() {
  DimensionlessParams p;
  p.forcing.a0 = 0.0;
  p.forcing.Kp = 0.0;
  p.shape.Kr = 0.0;
  p.shape.delta = 0.0;
  p.K = 0.0;
  p.H = 0.0;
  return p;
}

}  // namespace

TEST(FlowRate, PoiseuilleWithinQuadratureError) {
  const double exact = std::numbers::pi * 7.30 / 8;
  const double Q = flow_rate(poiseuille_samples(40), 1.0, 0.025);
  EXPECT_NEAR(Q, 2.8667, 2.8667e-3);
  EXPECT_LT(std::abs(Q - exact) / exact, 1e-3);
  EXPECT_NEAR(Q, 2.864911606840436, 1e-12);  // trapezoid value computed independently
}

TEST(FlowRate, ZeroAndLinearity) {
  EXPECT_EQ(flow_rate(std::vector<double>(41, 0.0), 0.8, 0.025), 0.0);
  const auto u = poiseuille_samples(40);
  auto twice = u;
  for (auto& x : twice) x *= 2.0;
  EXPECT_EQ(flow_rate(twice, 0.9, 0.025), 2.0 * flow_rate(u, 0.9, 0.025));
}

TEST(FlowRate, QuadratureIsSecondOrder) {
  auto err = [](std::size_t N) {
    const auto u = sampled(N, [](double x) { return 1 - x * x; });
    return std::abs(flow_rate(u, 1.0, 1.0 / N) - std::numbers::pi / 2);
  };
  EXPECT_NEAR(std::log2(err(20) / err(40)), 2.0, 0.05);
  EXPECT_NEAR(std::log2(err(40) / err(80)), 2.0, 0.05);
}

TEST(WallShear, PoiseuilleValue) {
  const auto u = poiseuille_samples(40);
  EXPECT_NEAR(wall_shear(u, 1.0, 0.0, 0.025), 3.65, 3.65 * 5e-3);
  EXPECT_EQ(wall_shear(std::vector<double>(41, 0.0), 1.0, 0.0, 0.025), 0.0);
  EXPECT_DOUBLE_EQ(wall_shear(u, 1.0, 0.1, 0.025) / wall_shear(u, 1.0, 0.0, 0.025), 1.1);
}

TEST(Nusselt, OneSidedDifference) {
  const auto linear = sampled(40, [](double x) { return x; });
  EXPECT_NEAR(nusselt(linear, 1.0, 0.025), 1.0, 1e-12);
  EXPECT_EQ(nusselt(std::vector<double>(41, 1.0), 1.0, 0.025), 0.0);
  const auto quad = sampled(40, [](double x) { return x * x; });
  EXPECT_NEAR(nusselt(quad, 1.0, 0.025), 1.975, 1e-12);
}

TEST(FluidAcceleration, FirstStepFromRest) {
  DimensionlessParams p;
  p.shape.delta = 0.0;
  p.shape.Kr = 0.0;
  const auto n = NumericalParams::make(5.0, 0.05, 0.025, 0.001);
  const FlowField prev = init_state(p, n);
  FlowField cur = prev;
  advance(cur, p, n);
  const auto wall = evaluate_wall(p.shape, n.dz, 0.0, n.M + 1);
  for (std::size_t j = 0; j < n.N; ++j)
    EXPECT_NEAR(fluid_accel(prev, cur, wall, n, 50, j), 1.0844444444444445, 1e-9);
  EXPECT_EQ(fluid_accel(prev, cur, wall, n, 50, n.N), 0.0);
}

TEST(FluidAcceleration, VanishesAtSteadyState) {
  const auto p = steady_newtonian();
  const auto n = NumericalParams::make(5.0, 0.05, 0.025, 0.001);
  auto run = steady_runner(p, n, 1e-12);
  ASSERT_TRUE(run.converged);
  const FlowField prev = run.state;
  FlowField cur = prev;
  advance(cur, p, n);
  const auto wall = evaluate_wall(p.shape, n.dz, prev.t, n.M + 1);
  for (std::size_t i = 0; i <= n.M; i += 5)
    for (std::size_t j = 0; j <= n.N; ++j)
      EXPECT_NEAR(fluid_accel(prev, cur, wall, n, i, j), 0.0, 1e-8);
}

TEST(FlowResistance, SteadyPoiseuilleValue) {
  DimensionlessParams p;
  CycleStats c;
  c.Q_mean = std::numbers::pi * 7.30 / 8;
  EXPECT_NEAR(flow_resistance_cycle(c, p), 12.73, 12.73 * 0.01);
}

TEST(FlowResistance, DegenerateCycleIsAnError) {
  DimensionlessParams p;
  CycleStats c;
  c.Q_mean = 0.0;
  EXPECT_THROW(flow_resistance_cycle(c, p), DegenerateCycleError);
  c.Q_mean = -0.1;
  EXPECT_THROW(flow_resistance_cycle(c, p), DegenerateCycleError);
  EXPECT_TRUE(std::isinf(flow_resistance(5.0, 7.3, 0.0)));
}

TEST(FlowResistance, IndependentOfMeanGradientInSteadyNewtonianLimit) {
  auto p = steady_newtonian();
  const auto n = NumericalParams::make(5.0, 0.05, 0.025, 0.001);
  auto resistance = [&](double Kbar) {
    p.forcing.Kbar = Kbar;
    CycleStats c;
    c.Q_mean = steady_runner(p, n).Q;
    return flow_resistance_cycle(c, p);
  };
  const double a = resistance(7.30), b = resistance(14.60);
  EXPECT_NEAR(a / b, 1.0, 1e-6);
}

TEST(Collector, CadenceAndSteadyDefect) {
  auto p = steady_newtonian();
  p.H = 2.0;  // decays faster
  const auto n = NumericalParams::make(0.5, 0.05, 0.025, 0.001);
  p.shape.L = 0.5;
  p.shape.d = 0.1;
  p.shape.l0 = 0.2;
  FlowField s = init_state(p, n);
  StepWorkspace ws;
  DiagnosticsCollector every(p, n, 5, 1), sparse(p, n, 5, 7);
  std::vector<WallState> w0(n.M + 1), w1(n.M + 1);
  long steps = 0;
  while (every.cycles().size() < 4) {
    FlowField prev = s;
    evaluate_wall(p.shape, n.dz, s.t, w0);
    advance(s, p, n, ws);
    evaluate_wall(p.shape, n.dz, s.t, w1);
    every.collect(prev, s, w0, w1);
    sparse.collect(prev, s, w0, w1);
    ++steps;
  }
  EXPECT_EQ(static_cast<long>(every.series().size()), steps);
  EXPECT_EQ(static_cast<long>(sparse.series().size()), steps / 7);
  const auto& c = every.cycles();
  EXPECT_LT(c[3].periodicity_defect, c[2].periodicity_defect);
  EXPECT_LT(c[2].periodicity_defect, c[1].periodicity_defect);
  EXPECT_LT(c[3].periodicity_defect, 1e-4);
  EXPECT_TRUE(std::isnan(c[0].periodicity_defect));
  for (const auto& s : every.series()) EXPECT_NEAR(s.T, s.t / (2 * std::numbers::pi * p.fp), 1e-15);
}
