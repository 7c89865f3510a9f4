// Acceptance run: one PASS/FAIL line per criterion, tolerances as pinned in
// the requirements. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "boundstate/commands.hpp"
#include "support.hpp"

using namespace boundstate;
using testing_support::gamma_oracle;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Tally {
  std::vector<std::string> notes;
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back((cond ? "" : "[x] ") + what);
  }
  void near(double got, double want, double tol, const char* what) {
    expect(std::isfinite(got) && std::abs(got - want) <= tol,
           fmt("%s = %.12g (want %.12g +- %.1g)", what, got, want, tol));
  }
};

int failures = 0;

void report(int n, const char* title, const std::function<void(Tally&)>& body) {
  Tally t;
  try {
    body(t);
  } catch (const std::exception& e) {
    t.expect(false, std::string("exception: ") + e.what());
  }
  if (!t.ok) ++failures;
  std::printf("%s criterion %d: %s\n", t.ok ? "PASS" : "FAIL", n, title);
  for (const auto& s : t.notes) std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

double finite_value(const quad::ExtendedReal& r) { return r.is_finite() ? r.value : std::nan(""); }

double max_deviation(const PotentialGrid& g, const std::function<double(double)>& closed) {
  double worst = 0.0;
  for (const auto& p : g.points) worst = std::max(worst, std::abs(p.v - closed(p.x)));
  return worst;
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main() {
  const auto started = Clock::now();
  std::vector<double> finite_products;

  report(1, "gaussian ground state U = hbar/2 within 1e-8, runtime < 1 s", [&](Tally& t) {
    const auto t0 = Clock::now();
    const auto r = uncertainty_report(catalog("gaussian"));
    const double dt = seconds_since(t0);
    t.near(finite_value(r.product_U), 0.5, 1e-8, "U");
    t.expect(dt < 1.0, fmt("runtime %.3f s", dt));
    finite_products.push_back(finite_value(r.product_U));
  });

  report(2, "quartic state moments against the gamma oracle, U = 0.5854 within 5e-4", [&](Tally& t) {
    const double x2 = gamma_oracle(0.75) / (4.0 * std::sqrt(2.0) * gamma_oracle(1.25));
    const double p2 = std::sqrt(2.0) * gamma_oracle(1.75) / gamma_oracle(1.25);
    const auto r = uncertainty_report(catalog("quartic"));
    t.near(finite_value(r.mean_x2), x2, 1e-6, "<x^2>");
    t.near(finite_value(r.mean_p2), p2, 1e-5, "<p^2>");
    t.near(finite_value(r.product_U), 0.5854, 5e-4, "U");
    finite_products.push_back(finite_value(r.product_U));
  });

  report(3, "extended state: <p^2> = 1/8, delta_p = 1/(2 sqrt 2), <x^2> divergent", [&](Tally& t) {
    const auto r = uncertainty_report(catalog("extended"));
    t.near(finite_value(r.mean_p2), 0.125, 1e-8, "<p^2>");
    t.near(finite_value(r.delta_p), 1.0 / (2.0 * std::sqrt(2.0)), 1e-8, "delta_p");
    t.expect(r.mean_x2.is_divergent(), std::string("<x^2> classified ") + quad::to_string(r.mean_x2.tag) + ": " +
                                           r.mean_x2.diagnostic);
  });

  report(4, "second Lorentzian state U = hbar/sqrt 2 within 1e-6", [&](Tally& t) {
    const auto r = uncertainty_report(catalog("lorentzian2"));
    t.near(finite_value(r.product_U), 1.0 / std::sqrt(2.0), 1e-6, "U");
    finite_products.push_back(finite_value(r.product_U));
  });

  report(5, "inverse reconstruction within 1e-9 of the closed forms on [-2, 2], 401 points", [&](Tally& t) {
    const std::vector<std::pair<const char*, std::function<double(double)>>> cases = {
        {"gaussian", [](double x) { return x * x - 1.0; }},
        {"quartic", [](double x) { return 16.0 * std::pow(x, 6) - 12.0 * x * x; }},
        {"extended", [](double x) { return (2.0 * x * x - 1.0) / std::pow(1.0 + x * x, 2); }},
    };
    for (const auto& [name, closed] : cases) {
      const double d = max_deviation(reconstruct_potential(catalog(name), -2.0, 2.0, 401), closed);
      t.expect(d < 1e-9, fmt("%s: max deviation %.3g", name, d));
    }
  });

  report(6, "eigensolver: x^2 gives 2n+1 for n = 0..4 within 1e-6, sextic E0 = 0 within 1e-3, < 10 s", [&](Tally& t) {
    const auto t0 = Clock::now();
    for (int n = 0; n <= 4; ++n) {
      const auto p = solve_state([](double x) { return x * x; }, n);
      t.near(p.energy, 2.0 * n + 1.0, 1e-6, fmt("E_%d", n).c_str());
      t.expect(p.node_count == n, fmt("E_%d has %d nodes", n, p.node_count));
    }
    SolverConfig cfg;
    cfg.x_min = -3.0;
    cfg.x_max = 3.0;
    cfg.step = 1.0 / 1024.0;
    const auto s = solve_state([](double x) { return 16.0 * std::pow(x, 6) - 12.0 * x * x; }, 0, cfg);
    t.near(s.energy, 0.0, 1e-3, "sextic E_0");
    const double dt = seconds_since(t0);
    t.expect(dt < 10.0, fmt("runtime %.3f s", dt));
  });

  report(7, "threshold eigenpair residual < 1e-10 in sup norm on [-10, 10]", [&](Tally& t) {
    const auto v = [](double x) { return (2.0 * x * x - 1.0) / std::pow(1.0 + x * x, 2); };
    for (int n : {2001, 20001}) {
      const double r = verify_eigenpair(v, 0.0, catalog("extended"), -10.0, 10.0, n);
      t.expect(r < 1e-10, fmt("residual %.3g on %d points", r, n));
    }
  });

  report(8, "improper-integral oracle", [&](Tally& t) {
    const auto root = quad::integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    t.near(finite_value(root), 2.0, 1e-8, "int_0^1 x^-1/2");
    for (double beta : {0.5, 1.0}) {
      const auto r = quad::integrate_half_line([beta](double x) { return std::pow(x, -beta); }, 1.0);
      t.expect(r.is_divergent(), fmt("int_1^inf x^-%.1f is %s", beta, quad::to_string(r.tag)));
    }
    for (double beta : {1.5, 2.0, 3.0}) {
      const auto r = quad::integrate_half_line([beta](double x) { return std::pow(x, -beta); }, 1.0);
      t.near(finite_value(r), 1.0 / (beta - 1.0), 1e-8, fmt("int_1^inf x^-%.1f", beta).c_str());
    }
  });

  report(9, "decay verdicts and classifier/quadrature consistency", [&](Tally& t) {
    const std::vector<std::pair<const char*, Verdict>> expected = {{"gaussian", Verdict::TightlyBound},
                                                                   {"quartic", Verdict::TightlyBound},
                                                                   {"lorentzian2", Verdict::TightlyBound},
                                                                   {"extended", Verdict::Extended}};
    for (const auto& [name, verdict] : expected) {
      const auto c = consistency_check_detailed(catalog(name));
      t.expect(c.decay.verdict == verdict, fmt("%s: %s", name, to_string(c.decay.verdict)));
      t.expect(c.agreement == Agreement::Consistent, fmt("%s: %s (%s)", name, to_string(c.agreement), c.note.c_str()));
    }
    for (double q : {1.2, 1.4, 1.6, 2.5}) {
      const auto w = from_expression(parse(fmt("(1+x^2)^(-%.2f)", q / 2.0)));
      const auto c = consistency_check_detailed(w);
      const Verdict v = c.decay.verdict;
      const bool verdict_ok = q < 1.5 ? v == Verdict::Extended
                                      : (q > 2.0 ? v == Verdict::TightlyBound : v != Verdict::Extended);
      t.expect(verdict_ok, fmt("q = %.1f: %s, exponent %.4f", q, to_string(v), c.decay.right_tail.exponent_estimate));
      t.expect(c.agreement == Agreement::Consistent, fmt("q = %.1f: %s", q, to_string(c.agreement)));
    }
  });

  report(10, "property suites, byte-stable report output, full suite wall time < 60 s", [&](Tally& t) {
    for (const char* s : {"exp(-x^2/2)*(1+x^2)", "1/(1+x^4)", "exp(-x^6)", "exp(-(x-1)^2)+exp(-(x+1)^2)",
                          "(1+x^2)^(-1.25)"}) {
      finite_products.push_back(finite_value(uncertainty_report(from_expression(parse(s))).product_U));
    }
    double lowest = 1e300;
    int finite = 0;
    for (double u : finite_products) {
      if (!std::isfinite(u)) continue;
      ++finite;
      lowest = std::min(lowest, u);
    }
    t.expect(finite >= 6 && lowest >= 0.5 - 1e-9, fmt("Heisenberg: min U = %.12g over %d finite reports", lowest, finite));

    double worst_shift = 0.0;
    for (const char* name : {"gaussian", "quartic", "lorentzian2"}) {
      const auto w = catalog(name);
      const double base = finite_value(uncertainty_report(w).product_U);
      for (double a : {0.5, 2.0}) {
        worst_shift = std::max(worst_shift, std::abs(finite_value(uncertainty_report(dilated(w, a)).product_U) - base));
      }
      for (double c : {-3.0, 1.7}) {
        worst_shift =
            std::max(worst_shift, std::abs(finite_value(uncertainty_report(translated(w, c)).product_U) - base));
      }
    }
    t.expect(worst_shift <= 1e-6, fmt("scale/translation: max |dU| = %.3g", worst_shift));

    testing_support::ExprGen gen(424242);
    const double h = 1e-4;
    double worst_fd = 0.0;
    int pairs = 0;
    for (int k = 0; k < 1000; ++k) {
      const auto e = parse(gen.smooth(1 + gen.pick(3)));
      const double x = gen.uniform(-2.0, 2.0);
      const Jet2 j = e.eval_jet2(x);
      const double fp = e.eval(x + h), fm = e.eval(x - h), f0 = e.eval(x);
      const double scale = std::max({1.0, std::abs(f0), std::abs(j.d1), std::abs(j.d2)});
      worst_fd = std::max({worst_fd, std::abs(j.d1 - (fp - fm) / (2.0 * h)) / scale,
                           std::abs(j.d2 - (fp - 2.0 * f0 + fm) / (h * h)) / scale});
      ++pairs;
    }
    t.expect(pairs == 1000 && worst_fd <= 1e-6, fmt("jets vs finite differences: worst %.3g over %d pairs", worst_fd, pairs));

    const fs::path dir = fs::temp_directory_path() / ("boundstate_acceptance." + std::to_string(::getpid()));
    fs::remove_all(dir);
    std::ostringstream sink;
    cli::Context ctx{sink, sink, std::nullopt, std::nullopt, std::nullopt};
    const int ca = cli::run_paper(ctx, (dir / "a").string()), cb = cli::run_paper(ctx, (dir / "b").string());
    bool same = ca == cli::kOk && cb == cli::kOk;
    for (const char* name : {"fig1a.csv", "fig1b.csv", "fig1c.csv", "paper_report.json"}) {
      same = same && io::read_file(dir / "a" / name) == io::read_file(dir / "b" / name);
    }
    t.expect(same, fmt("report and figure files byte-identical across two runs (exit codes %d, %d)", ca, cb));
    fs::remove_all(dir);

    // The unit suites are timed here too, so one line answers the wall-time question.
    double suite = 0.0;
    for (const auto& name : split(BOUNDSTATE_UNIT_TESTS)) {
      const fs::path exe = fs::path(BOUNDSTATE_TEST_DIR) / name;
      const auto t0 = Clock::now();
      const int status = std::system(("\"" + exe.string() + "\" >/dev/null 2>&1").c_str());
      const double dt = seconds_since(t0);
      suite += dt;
      t.expect(status == 0, fmt("%s: %s in %.2f s", name.c_str(), status == 0 ? "passed" : "FAILED", dt));
    }
    const double total = suite + seconds_since(started);
    t.expect(total < 60.0, fmt("unit suites %.2f s + acceptance = %.2f s", suite, total));
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
