#pragma once

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "boundstate/eigensolver.hpp"
#include "boundstate/errors.hpp"
#include "boundstate/expr.hpp"
#include "boundstate/wavefunction.hpp"

namespace boundstate {

/*
 * Flat key = value text with section headers:
 *
 *   [units]        hbar, mass_factor
 *   [tolerances]   quad_tol, solver_x_min, solver_x_max, solver_step,
 *                  solver_energy_tol, solver_max_bisections
 *   [states]       <label> = catalog:<name> | expr:<expression>
 *   [outputs]      dir
 *
 * '#' starts a comment. Labels become file names, so they are restricted
 * to [A-Za-z0-9_.-].
 */
struct StateSpec {
  std::string label;
  std::string source;  // as written after the prefix
  bool from_catalog = false;
  std::optional<Expression> expression;
};

struct Manifest {
  std::vector<StateSpec> states;
  Units units;
  std::optional<double> quad_tol;
  SolverConfig solver;
  std::string output_dir = "out";
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_real(std::string_view text) {
  const std::string s(text);
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline bool valid_label(std::string_view s) {
  return !s.empty() && s != "." && s != ".." && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace detail

/// Parses and validates in one pass; every problem is reported together.
inline Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::vector<std::string> problems;
  std::set<std::string> labels;
  std::string section;
  int line_no = 0;

  auto fail = [&](const std::string& msg) { problems.push_back("line " + std::to_string(line_no) + ": " + msg); };
  auto real_value = [&](std::string_view key, std::string_view val, auto&& check, const char* what) {
    const auto v = detail::parse_real(val);
    if (!v) {
      fail(std::string(key) + ": '" + std::string(val) + "' is not a number");
      return std::optional<double>{};
    }
    if (!check(*v)) {
      fail(std::string(key) + " must be " + what);
      return std::optional<double>{};
    }
    return v;
  };
  auto positive = [](double v) { return v > 0.0; };
  auto any = [](double) { return true; };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        fail("malformed section header");
        continue;
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "units" && section != "tolerances" && section != "states" && section != "outputs") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail("expected key = value");
      continue;
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const auto val = detail::trim(line.substr(eq + 1));
    if (key.empty()) {
      fail("empty key");
      continue;
    }

    if (section.empty()) {
      fail("'" + key + "' appears before any section header");
    } else if (section == "units") {
      if (key == "hbar") {
        if (auto v = real_value(key, val, positive, "positive")) m.units.hbar = *v;
      } else if (key == "mass_factor") {
        if (auto v = real_value(key, val, positive, "positive")) m.units.mass_factor = *v;
      } else {
        fail("unknown key '" + key + "' in [units]");
      }
    } else if (section == "tolerances") {
      if (key == "quad_tol") {
        if (auto v = real_value(key, val, positive, "positive")) m.quad_tol = *v;
      } else if (key == "solver_x_min") {
        if (auto v = real_value(key, val, any, "")) m.solver.x_min = *v;
      } else if (key == "solver_x_max") {
        if (auto v = real_value(key, val, any, "")) m.solver.x_max = *v;
      } else if (key == "solver_step") {
        if (auto v = real_value(key, val, positive, "positive")) m.solver.step = *v;
      } else if (key == "solver_energy_tol") {
        if (auto v = real_value(key, val, positive, "positive")) m.solver.energy_tol = *v;
      } else if (key == "solver_max_bisections") {
        auto v = real_value(key, val, [](double d) { return d >= 1 && d == std::floor(d) && d < 1e6; },
                            "a positive integer");
        if (v) m.solver.max_bisections = static_cast<int>(*v);
      } else {
        fail("unknown key '" + key + "' in [tolerances]");
      }
    } else if (section == "outputs") {
      if (key == "dir") {
        if (val.empty()) fail("dir is empty");
        else m.output_dir = std::string(val);
      } else {
        fail("unknown key '" + key + "' in [outputs]");
      }
    } else if (section == "states") {
      if (!detail::valid_label(key)) {
        fail("label '" + key + "' may only contain letters, digits, '_', '-' and '.'");
        continue;
      }
      if (!labels.insert(key).second) {
        fail("duplicate label '" + key + "'");
        continue;
      }
      StateSpec s;
      s.label = key;
      if (val.substr(0, 8) == "catalog:") {
        s.from_catalog = true;
        s.source = std::string(detail::trim(val.substr(8)));
        if (std::find(kCatalogNames.begin(), kCatalogNames.end(), s.source) == kCatalogNames.end()) {
          fail("state '" + key + "': unknown catalog name '" + s.source + "'");
          continue;
        }
      } else if (val.substr(0, 5) == "expr:") {
        s.source = std::string(detail::trim(val.substr(5)));
        try {
          s.expression = Expression::parse(s.source);
        } catch (const Error& e) {
          fail("state '" + key + "': " + e.what());
          continue;
        }
      } else {
        fail("state '" + key + "': value must start with 'catalog:' or 'expr:'");
        continue;
      }
      m.states.push_back(std::move(s));
    }
  }

  if (!(m.solver.x_min < m.solver.x_max)) problems.push_back("solver_x_min must be below solver_x_max");
  if (m.states.empty()) problems.push_back("no states defined in [states]");
  if (!problems.empty()) throw ManifestError(std::move(problems));
  return m;
}

/// Builds the normalized state named by a manifest entry.
inline Wavefunction instantiate(const StateSpec& s, const Units& units, const quad::Options& opt = {}) {
  if (s.from_catalog) {
    Wavefunction w = catalog(s.source, units);
    w.label = s.label;
    return w;
  }
  return from_expression(*s.expression, units, s.label, opt);
}

}  // namespace boundstate
