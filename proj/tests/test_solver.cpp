#include <gtest/gtest.h>

#include <cmath>

#include "stenoflow/solver.hpp"

using namespace stenoflow;

namespace {

NumericalParams reference_grid() { return NumericalParams::make(5.0, 0.05, 0.025, 0.001); }

DimensionlessParams rigid_straight() {
  DimensionlessParams p;
  p.shape.delta = 0.0;
  p.shape.Kr = 0.0;
  return p;
}

FlowField advanced(const DimensionlessParams& p, const NumericalParams& n, int steps) {
  FlowField s = init_state(p, n);
  StepWorkspace ws;
  for (int k = 0; k < steps; ++k) advance(s, p, n, ws);
  return s;
}

double max_abs_diff(const Field2D& a, const Field2D& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    d = std::max(d, std::abs(a.values()[k] - b.values()[k]));
  return d;
}

}  // namespace

TEST(StabilityLimit, ReferenceConfiguration) {
  DimensionlessParams p;
  const double limit = stability_limit(p, reference_grid());
  EXPECT_NEAR(limit, 0.0013, 1e-4);
  EXPECT_GE(limit, 0.001);
}

TEST(StabilityLimit, StraightNewtonianTube) {
  auto p = rigid_straight();
  p.K = 0.0;
  EXPECT_NEAR(stability_limit(p, reference_grid()), 0.0028125, 1e-15);
  p.alpha = 6.0;
  EXPECT_NEAR(stability_limit(p, reference_grid()), 4 * 0.0028125, 1e-14);
}

TEST(InitState, RestWithQuadraticTemperature) {
  DimensionlessParams p;
  const auto n = reference_grid();
  const auto s = init_state(p, n);
  for (std::size_t i = 0; i <= n.M; i += 10) {
    EXPECT_EQ(s.u(i, 0), 0.0);
    EXPECT_EQ(s.theta(i, n.N), 1.0);
    EXPECT_EQ(s.theta(i, 0), 0.0);
    // Zero slope at the axis under the three-point one-sided stencil.
    EXPECT_NEAR(-3 * s.theta(i, 0) + 4 * s.theta(i, 1) - s.theta(i, 2), 0.0, 1e-15);
  }
  EXPECT_EQ(s.t, 0.0);
}

TEST(StepAxial, FirstStepFromRest) {
  auto p = rigid_straight();  // a0 = 1, Kbar 7.30, Kp 1.46, alpha 3
  const auto n = reference_grid();
  const auto s = init_state(p, n);
  const auto wall = evaluate_wall(p.shape, n.dz, 0.0, n.M + 1);
  Field2D u = s.u;
  step_axial(s, p, n, wall, u);
  for (std::size_t i = 1; i < n.M; ++i)
    for (std::size_t j = 1; j < n.N; ++j) EXPECT_NEAR(u(i, j), 0.0010844444444444445, 1e-15);
}

TEST(StepAxial, LorentzDragIsMonotoneInH) {
  DimensionlessParams p;
  const auto n = reference_grid();
  auto s = advanced(p, n, 300);
  const auto wall = evaluate_wall(p.shape, n.dz, s.t, n.M + 1);
  Field2D lo = s.u, hi = s.u;
  auto p2 = p;
  p2.H = 3.0;
  step_axial(s, p, n, wall, lo);
  step_axial(s, p2, n, wall, hi);
  for (std::size_t i = 1; i < n.M; ++i)
    for (std::size_t j = 1; j < n.N; ++j) {
      ASSERT_GT(s.u(i, j), 0.0);
      EXPECT_GE(lo(i, j), hi(i, j));
    }
}

TEST(StepAxial, NewtonianIgnoresMicrorotation) {
  DimensionlessParams p;
  p.K = 0.0;
  const auto n = reference_grid();
  auto s = advanced(p, n, 50);
  const auto wall = evaluate_wall(p.shape, n.dz, s.t, n.M + 1);
  Field2D a = s.u, b = s.u;
  step_axial(s, p, n, wall, a);
  for (auto& x : s.w.values()) x = 0.7;
  step_axial(s, p, n, wall, b);
  EXPECT_EQ(a, b);
}

TEST(StepMicrorotation, RestStaysAtRest) {
  DimensionlessParams p;
  const auto n = reference_grid();
  auto s = init_state(p, n);
  const auto wall = evaluate_wall(p.shape, n.dz, 0.0, n.M + 1);
  Field2D w(n.M + 1, n.N + 1, 0.0);
  step_microrotation(s, p, n, wall, w);
  for (double x : w.values()) EXPECT_EQ(x, 0.0);

  // Newtonian: no source for w even with flow present.
  p.K = 0.0;
  for (auto& x : s.u.values()) x = 1.0;
  step_microrotation(s, p, n, wall, w);
  for (double x : w.values()) EXPECT_EQ(x, 0.0);
}

TEST(StepMicrorotation, ShearDrivesPositiveSpinNearWall) {
  auto p = rigid_straight();
  const auto n = reference_grid();
  auto s = init_state(p, n);
  for (std::size_t i = 0; i <= n.M; ++i)
    for (std::size_t j = 0; j <= n.N; ++j) s.u(i, j) = p.forcing.Kbar / 4 * (1 - n.xi(j) * n.xi(j));
  const auto wall = evaluate_wall(p.shape, n.dz, 0.0, n.M + 1);
  Field2D w(n.M + 1, n.N + 1, 0.0);
  step_microrotation(s, p, n, wall, w);
  for (std::size_t j = n.N - 5; j < n.N; ++j) EXPECT_GT(w(50, j), 0.0);
}

TEST(StepTemperature, ConductionFixedPoint) {
  DimensionlessParams p;
  const auto n = reference_grid();
  auto s = init_state(p, n);
  for (auto& x : s.theta.values()) x = 1.0;
  const auto wall = evaluate_wall(p.shape, n.dz, 0.0, n.M + 1);
  Field2D th = s.theta;
  step_temperature(s, p, n, wall, th);
  for (double x : th.values()) EXPECT_DOUBLE_EQ(x, 1.0);
}

TEST(StepTemperature, JouleHeatingIncrement) {
  auto p = rigid_straight();
  const auto n = reference_grid();
  auto s = init_state(p, n);
  for (auto& x : s.theta.values()) x = 1.0;
  for (auto& x : s.u.values()) x = 0.8;
  const auto wall = evaluate_wall(p.shape, n.dz, 0.0, n.M + 1);
  Field2D th = s.theta;
  step_temperature(s, p, n, wall, th);
  const double expected = n.dt * p.Ec * p.H * p.H * 0.64 / (p.alpha * p.alpha);
  EXPECT_GT(expected, 0.0);
  for (std::size_t i = 1; i < n.M; ++i)
    for (std::size_t j = 1; j < n.N; ++j) EXPECT_NEAR(th(i, j) - 1.0, expected, 1e-15);

  for (auto& q : {std::pair{0.0, p.Ec}, std::pair{p.H, 0.0}}) {
    auto p0 = p;
    p0.H = q.first;
    p0.Ec = q.second;
    step_temperature(s, p0, n, wall, th);
    for (double x : th.values()) EXPECT_EQ(x, 1.0);
  }
}

TEST(UpdateRadial, ClosureConsistentWithBoundaryConditions) {
  DimensionlessParams p;
  const auto n = reference_grid();
  auto s = advanced(p, n, 100);
  const auto wall = evaluate_wall(p.shape, n.dz, s.t, n.M + 1);
  update_radial(s, n, wall);
  for (std::size_t i = 0; i <= n.M; ++i) {
    EXPECT_EQ(s.v(i, 0), 0.0);
    EXPECT_EQ(s.v(i, n.N), wall[i].dRdt);
  }
  auto rigid = rigid_straight();
  const auto wall2 = evaluate_wall(rigid.shape, n.dz, 0.3, n.M + 1);
  update_radial(s, n, wall2);
  for (double x : s.v.values()) EXPECT_EQ(x, 0.0);
}

TEST(BoundaryConditions, AxisClosureExactForQuadratics) {
  DimensionlessParams p;
  const auto n = reference_grid();
  auto s = init_state(p, n);
  for (std::size_t i = 0; i <= n.M; ++i)
    for (std::size_t j = 0; j <= n.N; ++j) {
      s.u(i, j) = j == 0 ? -5.0 : 1 - n.xi(j) * n.xi(j);
      s.w(i, j) = 0.3;
    }
  apply_axis_bc(s, n);
  const auto wall = evaluate_wall(p.shape, n.dz, 0.2, n.M + 1);
  apply_wall_bc(s, n, wall);
  for (std::size_t i = 0; i <= n.M; ++i) {
    EXPECT_NEAR(s.u(i, 0), 1.0, 1e-14);
    EXPECT_EQ(s.theta(i, n.N), 1.0);
    EXPECT_EQ(s.w(i, 0), 0.0);
    EXPECT_EQ(s.w(i, n.N), 0.0);
    EXPECT_EQ(s.v(i, n.N), wall[i].dRdt);
  }
}

TEST(AxialBoundary, CopiesNearestInteriorColumn) {
  DimensionlessParams p;
  const auto n = reference_grid();
  auto s = init_state(p, n);
  for (std::size_t i = 0; i <= n.M; ++i)
    for (std::size_t j = 0; j <= n.N; ++j) {
      s.u(i, j) = 2.0;
      s.w(i, j) = 0.1 * n.z(i);
    }
  apply_axial_boundary(s, n);
  for (std::size_t j = 0; j <= n.N; ++j) {
    EXPECT_EQ(s.u(0, j), 2.0);
    EXPECT_EQ(s.u(n.M, j), 2.0);
    EXPECT_EQ(s.w(0, j), s.w(1, j));
    EXPECT_EQ(s.w(n.M, j), s.w(n.M - 1, j));
    EXPECT_NEAR(s.w(n.M, j), 0.1 * (5.0 - n.dz), 1e-14);
    EXPECT_NEAR(s.w(50, j), 0.1 * 2.5, 1e-14);  // interior untouched
  }
}

TEST(Advance, StraightTubeIsAxiallyUniform) {
  auto p = rigid_straight();
  const auto n = reference_grid();
  const auto s = advanced(p, n, 3000);
  for (std::size_t j = 0; j <= n.N; ++j) {
    const double mid = s.u(50, j);
    const double tol = 1e-3 * std::max(std::abs(mid), 1e-12);
    EXPECT_NEAR(s.u(0, j), mid, tol);
    EXPECT_NEAR(s.u(n.M, j), mid, tol);
  }
}

TEST(Advance, BoundaryEqualitiesHoldAfterEveryStep) {
  DimensionlessParams p;
  const auto n = reference_grid();
  FlowField s = init_state(p, n);
  StepWorkspace ws;
  for (int k = 0; k < 300; ++k) {
    advance(s, p, n, ws);
    const auto wall = evaluate_wall(p.shape, n.dz, s.t, n.M + 1);
    for (std::size_t i = 0; i <= n.M; ++i) {
      ASSERT_EQ(s.u(i, n.N), 0.0);
      ASSERT_EQ(s.w(i, n.N), 0.0);
      ASSERT_EQ(s.theta(i, n.N), 1.0);
      ASSERT_EQ(s.v(i, n.N), wall[i].dRdt);
      ASSERT_EQ(s.v(i, 0), 0.0);
      ASSERT_EQ(s.w(i, 0), 0.0);
      ASSERT_EQ(s.u(i, 0), (4.0 * s.u(i, 1) - s.u(i, 2)) / 3.0);
      ASSERT_EQ(s.theta(i, 0), (4.0 * s.theta(i, 1) - s.theta(i, 2)) / 3.0);
    }
  }
}

TEST(Advance, NewtonianTrajectoryIndependentOfMicropolarInputs) {
  DimensionlessParams a;
  a.K = 0.0;
  auto b = a;
  b.m = 0.02;
  b.J = 0.5;
  const auto n = reference_grid();
  FlowField sa = init_state(a, n), sb = init_state(b, n);
  for (auto& x : sb.w.values()) x = -0.05;
  StepWorkspace wa, wb;
  for (int k = 0; k < 200; ++k) {
    advance(sa, a, n, wa);
    advance(sb, b, n, wb);
  }
  EXPECT_EQ(sa.u, sb.u);
  EXPECT_EQ(sa.theta, sb.theta);
}

TEST(Advance, FieldUpdatesAreOrderIndependent) {
  DimensionlessParams p;
  const auto n = reference_grid();
  const auto s = advanced(p, n, 400);
  const auto wall = evaluate_wall(p.shape, n.dz, s.t, n.M + 1);
  FlowField a = s, b = s;
  step_axial(s, p, n, wall, a.u);
  step_microrotation(s, p, n, wall, a.w);
  step_temperature(s, p, n, wall, a.theta);
  step_temperature(s, p, n, wall, b.theta);
  step_microrotation(s, p, n, wall, b.w);
  step_axial(s, p, n, wall, b.u);
  EXPECT_EQ(a, b);
}

TEST(Advance, TwoHalfStepsMatchOneFullStepToSecondOrder) {
  DimensionlessParams p;
  const auto n = reference_grid();
  const auto start = advanced(p, n, 500);
  auto discrepancy = [&](double dt) {
    NumericalParams fine = n, coarse = n;
    fine.dt = dt;
    coarse.dt = 2 * dt;
    FlowField a = start, b = start;
    StepWorkspace wa, wb;
    for (int k = 0; k < 10; ++k) advance(a, p, fine, wa);
    for (int k = 0; k < 5; ++k) advance(b, p, coarse, wb);
    return max_abs_diff(a.u, b.u);
  };
  const double e1 = discrepancy(0.0004), e2 = discrepancy(0.0002);
  EXPECT_GT(e1, 0.0);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.3);
}

TEST(Advance, SteadyPoiseuilleLimit) {
  auto p = rigid_straight();
  p.forcing.a0 = 0.0;
  p.forcing.Kp = 0.0;
  p.K = 0.0;
  p.H = 0.0;
  const auto n = reference_grid();
  FlowField s = init_state(p, n);
  StepWorkspace ws;
  double change = 1.0;
  for (int k = 0; k < 100000 && change >= 1e-10; ++k) {
    const Field2D before = s.u;
    advance(s, p, n, ws);
    change = max_abs_diff(before, s.u);
  }
  ASSERT_LT(change, 1e-10);
  for (std::size_t j = 0; j <= n.N; ++j)
    EXPECT_NEAR(s.u(50, j), p.forcing.Kbar / 4 * (1 - n.xi(j) * n.xi(j)), 1e-6);
}

TEST(Advance, UnforcedFlowDecaysMonotonically) {
  auto p = rigid_straight();
  p.forcing = ForcingParams{0.0, 1.0, 0.0, 0.0, 0.0};  // no forcing at all
  const auto n = reference_grid();
  FlowField s = init_state(p, n);
  for (std::size_t i = 0; i <= n.M; ++i)
    for (std::size_t j = 0; j <= n.N; ++j) s.u(i, j) = 1 - n.xi(j) * n.xi(j);
  auto energy = [&] {
    double e = 0.0;
    for (std::size_t j = 0; j <= n.N; ++j) e += n.xi(j) * s.u(50, j) * s.u(50, j);
    return e;
  };
  StepWorkspace ws;
  double last = energy();
  for (int k = 0; k < 5000; ++k) {
    advance(s, p, n, ws);
    const double e = energy();
    ASSERT_LE(e, last);
    last = e;
  }
  EXPECT_LT(last, 1e-3);
}

TEST(Advance, DetectsDivergenceBeyondStabilityLimit) {
  DimensionlessParams p;
  auto n = reference_grid();
  n.dt = 4.0 * stability_limit(p, n);
  FlowField s = init_state(p, n);
  StepWorkspace ws;
  bool caught = false;
  try {
    for (int k = 0; k < 5000; ++k) advance(s, p, n, ws);
  } catch (const DivergenceError& e) {
    caught = true;
    EXPECT_LE(e.step, 5000);
    EXPECT_FALSE(e.field.empty());
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
  EXPECT_TRUE(caught);
}

TEST(ContinuityResidual, VanishesWithoutFlowOrWallMotion) {
  auto p = rigid_straight();
  const auto n = reference_grid();
  auto s = init_state(p, n);
  const auto wall = evaluate_wall(p.shape, n.dz, 0.0, n.M + 1);
  const Field2D at_rest = continuity_residual(s, n, wall);
  for (double x : at_rest.values()) EXPECT_EQ(x, 0.0);
  for (std::size_t i = 0; i <= n.M; ++i)
    for (std::size_t j = 0; j <= n.N; ++j) s.u(i, j) = 1.825 * (1 - n.xi(j) * n.xi(j));
  const Field2D parallel = continuity_residual(s, n, wall);
  for (double x : parallel.values()) EXPECT_EQ(x, 0.0);
}
