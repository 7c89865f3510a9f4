#include <gtest/gtest.h>

#include <cmath>

#include "boundstate/eigensolver.hpp"

using namespace boundstate;

namespace {

const RealFunction kHarmonic = [](double x) { return x * x; };
const RealFunction kSextic = [](double x) { return 16.0 * std::pow(x, 6) - 12.0 * x * x; };
const RealFunction kThreshold = [](double x) { return (2.0 * x * x - 1.0) / std::pow(1.0 + x * x, 2); };

double trapezoid_norm(const Eigenpair& p) {
  double s = 0.0;
  for (std::size_t i = 1; i < p.grid.size(); ++i) {
    const double h = p.grid[i].first - p.grid[i - 1].first;
    s += 0.5 * h * (p.grid[i].second * p.grid[i].second + p.grid[i - 1].second * p.grid[i - 1].second);
  }
  return s;
}

}  // namespace

TEST(Solve, HarmonicLadder) {
  for (int n = 0; n <= 4; ++n) {
    const auto p = solve_state(kHarmonic, n);
    EXPECT_NEAR(p.energy, 2.0 * n + 1.0, 1e-6) << n;
    EXPECT_EQ(p.node_count, n);
    EXPECT_EQ(p.index, n);
    EXPECT_NEAR(trapezoid_norm(p), 1.0, 1e-8);
    EXPECT_EQ(p.grid.size(), 16u * 512u + 1u);
  }
}

TEST(Solve, SexticGroundStateAtZero) {
  SolverConfig cfg;
  cfg.x_min = -3.0;
  cfg.x_max = 3.0;
  cfg.step = 1.0 / 1024.0;
  const auto p = solve_state(kSextic, 0, cfg);
  EXPECT_NEAR(p.energy, 0.0, 1e-3);
  EXPECT_EQ(p.node_count, 0);
}

TEST(Solve, DoubleWellSplitting) {
  // Two nearly degenerate states must still come out in order.
  const RealFunction dw = [](double x) { return (x * x - 4.0) * (x * x - 4.0); };
  SolverConfig cfg;
  cfg.x_min = -5.0;
  cfg.x_max = 5.0;
  cfg.step = 1.0 / 512.0;
  cfg.e_hi = 20.0;
  const auto e0 = solve_state(dw, 0, cfg), e1 = solve_state(dw, 1, cfg);
  EXPECT_EQ(e0.node_count, 0);
  EXPECT_EQ(e1.node_count, 1);
  EXPECT_LT(e0.energy, e1.energy);
  EXPECT_LT(e1.energy - e0.energy, 0.1);
}

TEST(Solve, GroundStateIsPositive) {
  const auto p = solve_state(kHarmonic, 0);
  for (const auto& [x, psi] : p.grid) EXPECT_GE(psi, -1e-300) << x;
  EXPECT_NEAR(p.grid[p.grid.size() / 2].second, std::pow(std::numbers::pi, -0.25), 1e-5);
}

TEST(Property, NumerovIsFourthOrder) {
  std::vector<double> errs;
  for (double step : {1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0}) {
    SolverConfig cfg;
    cfg.step = step;
    cfg.energy_tol = 1e-15;
    errs.push_back(std::abs(solve_state(kHarmonic, 0, cfg).energy - 1.0));
  }
  const double slope = std::log(errs.front() / errs.back()) / std::log(4.0);
  EXPECT_GE(slope, 4.0) << errs[0] << " " << errs[1] << " " << errs[2];
}

TEST(Property, ParityOfEigenfunctions) {
  for (int n = 0; n <= 3; ++n) {
    const auto p = solve_state(kHarmonic, n);
    const std::size_t last = p.grid.size() - 1;
    double worst = 0.0;
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i <= last; ++i) {
      worst = std::max(worst, std::abs(p.grid[i].second - sign * p.grid[last - i].second));
    }
    EXPECT_LT(worst, 1e-6) << n;
  }
}

TEST(Errors, BracketMissesState) {
  SolverConfig cfg;
  cfg.e_lo = 0.0;
  cfg.e_hi = 4.0;
  try {
    solve_state(kHarmonic, 3, cfg);
    FAIL() << "expected BracketError";
  } catch (const BracketError& e) {
    EXPECT_EQ(e.nodes_low(), 0);
    EXPECT_EQ(e.nodes_high(), 2);
  }
  cfg.e_lo = 5.0;
  cfg.e_hi = 4.0;
  EXPECT_THROW(solve_state(kHarmonic, 0, cfg), BracketError);
}

TEST(Errors, BoxTooSmall) {
  SolverConfig cfg;
  cfg.x_min = -1.5;
  cfg.x_max = 1.5;
  cfg.step = 1.0 / 256.0;
  cfg.e_hi = 30.0;
  EXPECT_THROW(solve_state(kHarmonic, 0, cfg), BoxTooSmall);
}

TEST(Errors, ThresholdStateIsRefused) {
  SolverConfig cfg;
  cfg.x_min = -20.0;
  cfg.x_max = 20.0;
  cfg.step = 1.0 / 64.0;
  EXPECT_ANY_THROW(solve_state(kThreshold, 0, cfg));
  EXPECT_THROW(solve_state(kThreshold, 0, cfg), BoxTooSmall);
}

TEST(Errors, NoConvergence) {
  SolverConfig cfg;
  cfg.max_bisections = 2;
  EXPECT_THROW(solve_state(kHarmonic, 0, cfg), NoConvergence);
}

TEST(Errors, InvalidConfig) {
  SolverConfig cfg;
  cfg.step = 0.0;
  EXPECT_THROW(solve_state(kHarmonic, 0, cfg), InvalidArgument);
  cfg.step = 0.3;
  EXPECT_THROW(solve_state(kHarmonic, 0, cfg), InvalidArgument);
  cfg.step = 1.0;
  EXPECT_THROW(solve_state(kHarmonic, 0, cfg), InvalidArgument);  // 16 steps
  cfg = {};
  cfg.x_max = cfg.x_min;
  EXPECT_THROW(solve_state(kHarmonic, 0, cfg), InvalidArgument);
  EXPECT_THROW(solve_state(kHarmonic, -1), InvalidArgument);
}

TEST(Verify, Examples) {
  const auto ext = catalog("extended");
  EXPECT_LT(verify_eigenpair(kThreshold, 0.0, ext, -10.0, 10.0, 2001), 1e-10);
  const auto g = catalog("gaussian");
  EXPECT_LT(verify_eigenpair(kHarmonic, 1.0, g, -6.0, 6.0, 1201), 1e-10);
  // The residual is linear in the energy error.
  EXPECT_NEAR(verify_eigenpair(kHarmonic, 1.1, g, -6.0, 6.0, 1201), 0.1 * g(0.0), 1e-10);
  EXPECT_THROW(verify_eigenpair(kHarmonic, 1.0, g, 1.0, -1.0, 10), InvalidArgument);
  const Wavefunction half{parse("sqrt(x)"), 1.0, 0.0, {}, "half"};
  EXPECT_THROW(verify_eigenpair(kHarmonic, 1.0, half, -1.0, 1.0, 11), DomainError);
}
