// boundstate: command-line front end. Exit codes: 0 ok, 1 input error,
// 2 indeterminate result, 3 failed check.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boundstate/commands.hpp"

namespace cli = boundstate::cli;

int main(int argc, char** argv) {
  CLI::App app{"1D bound states: uncertainty products, inverse potentials, shooting eigenvalues, decay verdicts"};
  app.require_subcommand(1);

  std::optional<double> tol, hbar;
  app.add_option("--tol", tol, "quadrature tolerance (default 1e-8, or BOUNDSTATE_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--hbar", hbar, "value of hbar")->check(CLI::PositiveNumber);

  std::string manifest;
  std::string out_dir = "out";

  auto* analyze = app.add_subcommand("analyze", "moments, uncertainty product and decay verdict per state");
  analyze->add_option("--manifest", manifest, "manifest file")->required();

  auto* invert = app.add_subcommand("invert", "potential from psi''/psi for each state");
  std::vector<double> range = {-3.0, 3.0};
  int points = 601;
  double gauge = 0.0, node_threshold = 1e-10;
  invert->add_option("--manifest", manifest, "manifest file")->required();
  invert->add_option("--range", range, "window A B")->expected(2)->capture_default_str();
  invert->add_option("--points", points, "grid points")->capture_default_str();
  invert->add_option("--gauge", gauge, "ground-state energy E0 to add to psi''/psi")->capture_default_str();
  invert->add_option("--node-threshold", node_threshold, "refuse points where |psi| is at or below this")
      ->capture_default_str();

  auto* solve = app.add_subcommand("solve", "bound states of a potential by Numerov shooting");
  std::string potential;
  std::vector<int> states = {0};
  boundstate::SolverConfig cfg;
  std::optional<double> e_lo, e_hi;
  solve->add_option("--potential", potential, "V(x) as an expression in x")->required();
  solve->add_option("--states", states, "state indices, e.g. 0,1,2")->delimiter(',')->capture_default_str();
  solve->add_option("--x-min", cfg.x_min, "left edge of the box")->capture_default_str();
  solve->add_option("--x-max", cfg.x_max, "right edge of the box")->capture_default_str();
  solve->add_option("--step", cfg.step, "grid step")->capture_default_str();
  solve->add_option("--e-lo", e_lo, "lower end of the energy bracket (default min V)");
  solve->add_option("--e-hi", e_hi, "upper end of the energy bracket (default min of V at the edges)");
  solve->add_option("--energy-tol", cfg.energy_tol, "energy tolerance")->capture_default_str();
  solve->add_option("--max-bisections", cfg.max_bisections, "bisection limit")->capture_default_str();
  solve->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "pointwise residual of a candidate eigenpair");
  std::string state;
  double energy = 0.0, max_residual = 1e-10;
  std::vector<double> vrange = {-10.0, 10.0};
  int vpoints = 2001;
  verify->add_option("--potential", potential, "V(x) as an expression in x")->required();
  verify->add_option("--state", state, "catalog:NAME or expr:TEXT")->required();
  verify->add_option("--energy", energy, "candidate energy")->required();
  verify->add_option("--range", vrange, "window A B")->expected(2)->capture_default_str();
  verify->add_option("--points", vpoints, "grid points")->capture_default_str();
  verify->add_option("--max-residual", max_residual, "pass threshold")->capture_default_str();

  auto* paper = app.add_subcommand("paper", "recompute the reference values and write the figure datasets");
  paper->add_option("--out", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors are input errors; --help still exits 0.
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kInputError;
  }

  cli::Context ctx{std::cout, std::cerr, tol, hbar, std::nullopt};
  try {
    ctx.env_tol = cli::env_tolerance();
  } catch (const boundstate::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  }

  if (*analyze) return cli::run_analyze(ctx, manifest);
  if (*invert) return cli::run_invert(ctx, manifest, range[0], range[1], points, gauge, node_threshold);
  if (*solve) {
    cfg.e_lo = e_lo;
    cfg.e_hi = e_hi;
    return cli::run_solve(ctx, potential, states, cfg, out_dir);
  }
  if (*verify) return cli::run_verify(ctx, potential, state, energy, vrange[0], vrange[1], vpoints, max_residual);
  if (*paper) return cli::run_paper(ctx, out_dir);
  return cli::kInputError;
}
