#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "boundstate/decay.hpp"
#include "boundstate/eigensolver.hpp"
#include "boundstate/errors.hpp"
#include "boundstate/inverse.hpp"
#include "boundstate/observables.hpp"

namespace boundstate::io {

using Json = nlohmann::ordered_json;

// Everything written to disk goes through these two so that output is
// stable across runs: 12 significant digits, fixed field order.
inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

inline Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

inline Json to_json(const quad::ExtendedReal& r) {
  switch (r.tag) {
    case quad::Status::Finite: return number(r.value);
    case quad::Status::Divergent: return "infinite";
    case quad::Status::Indeterminate: return "unknown";
  }
  return "unknown";
}

inline Json to_json(const quad::TailModel& t) {
  Json j;
  j["super_polynomial"] = t.super_polynomial;
  j["exponent_estimate"] = t.super_polynomial || t.insufficient_samples ? Json(nullptr) : number(t.exponent_estimate);
  j["x_lo"] = number(t.x_lo);
  j["x_hi"] = number(t.x_hi);
  j["fit_residual"] = number(t.fit_residual);
  j["samples_used"] = t.samples_used;
  j["insufficient_samples"] = t.insufficient_samples;
  j["diagnostic"] = t.diagnostic;
  return j;
}

inline Json to_json(const MomentReport& m) {
  Json j;
  j["mean_x"] = to_json(m.mean_x);
  j["mean_x2"] = to_json(m.mean_x2);
  j["mean_p"] = to_json(m.mean_p);
  j["mean_p2"] = to_json(m.mean_p2);
  j["delta_x"] = to_json(m.delta_x);
  j["delta_p"] = to_json(m.delta_p);
  j["U"] = to_json(m.product_U);
  Json cls;
  auto put = [&](const char* k, const quad::ExtendedReal& r) { cls[k] = quad::to_string(r.tag); };
  put("mean_x", m.mean_x);
  put("mean_x2", m.mean_x2);
  put("mean_p", m.mean_p);
  put("mean_p2", m.mean_p2);
  put("delta_x", m.delta_x);
  put("delta_p", m.delta_p);
  put("U", m.product_U);
  j["classification"] = cls;
  j["notes"] = m.notes;
  return j;
}

inline Json to_json(const DecayReport& d) {
  Json j;
  j["verdict"] = to_string(d.verdict);
  j["criterion_exponent"] = d.criterion_exponent;
  j["margin"] = d.margin;
  j["left_tail"] = d.left_tail ? to_json(*d.left_tail) : Json("not applicable");
  j["right_tail"] = to_json(d.right_tail);
  j["explanation"] = d.explanation;
  return j;
}

inline Json to_json(const Units& u) {
  Json j;
  j["hbar"] = number(u.hbar);
  j["mass_factor"] = number(u.mass_factor);
  return j;
}

inline Json eigenpair_header(const Eigenpair& e) {
  Json j;
  j["index"] = e.index;
  j["energy"] = number(e.energy);
  j["nodes"] = e.node_count;
  j["residual"] = number(e.residual_norm);
  j["matching_defect"] = number(e.matching_defect);
  j["points"] = e.grid.size();
  return j;
}

inline std::string potential_csv(const PotentialGrid& g) {
  std::string s = "x,v\n";
  for (const auto& p : g.points) s += num(p.x) + "," + num(p.v) + "\n";
  return s;
}

inline std::string eigenpair_csv(const Eigenpair& e) {
  std::string s = "x,psi\n";
  for (const auto& [x, psi] : e.grid) s += num(x) + "," + num(psi) + "\n";
  return s;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
  if (!f) throw Error("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace boundstate::io
