#pragma once

/// @file io.hpp
/// @brief CSV and JSON serialization: trajectory/ensemble tables, run configs,
///        and classifier verdicts.
///
/// Numbers are rendered with std::to_chars (17 significant digits, '.'
/// decimal, locale-independent), which round-trips doubles exactly.  JSON
/// documents use nlohmann's ordered_json so key order is stable across runs.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <hiam/classifier.hpp>
#include <hiam/errors.hpp>
#include <hiam/params.hpp>
#include <hiam/simulate.hpp>

namespace hiam {

using ordered_json = nlohmann::ordered_json;

// ==============================================================================
// Number formatting
// ==============================================================================

/// 17-significant-digit general format: exact double round-trip, '.' decimal
/// regardless of locale, "inf"/"nan" for non-finite values.
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// ==============================================================================
// CSV
// ==============================================================================

inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,m_bar,price,pf\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    out << fmt17(tr.times[i]) << ',' << fmt17(tr.m_bar[i]) << ','
        << fmt17(tr.price[i]) << ',' << fmt17(tr.pf[i]) << '\n';
}

inline void write_ensemble_csv(std::ostream& out, const EnsembleStats& es) {
  out << "t,mean_m,stderr_m\n";
  for (std::size_t i = 0; i < es.times.size(); ++i)
    out << fmt17(es.times[i]) << ',' << fmt17(es.mean_m[i]) << ','
        << fmt17(es.stderr_m[i]) << '\n';
}

// ==============================================================================
// Config files
// ==============================================================================

/// Parses a run config object with keys lambda, theta, kappa, gamma, p0, m0,
/// n_agents, and mode ("constant_pf" | "follow_price").  Keys starting with
/// '_' are comments and ignored; any other unknown key is rejected (typo
/// guard).  Only structural validity is checked here — call require_valid for
/// model-level validation.
inline std::pair<ModelParams, FundamentalMode> parse_config_json(const ordered_json& j) {
  if (!j.is_object()) throw validation_error("config must be a JSON object");
  static const char* const keys[] = {"lambda", "theta", "kappa", "gamma",
                                     "p0",     "m0",    "n_agents", "mode"};
  for (const char* k : keys)
    if (!j.contains(k))
      throw validation_error(std::string("config missing key \"") + k + "\"");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (!k.empty() && k[0] == '_') continue;
    bool known = false;
    for (const char* kk : keys) known = known || k == kk;
    if (!known) throw validation_error("config has unknown key \"" + k + "\"");
  }
  auto number = [&](const char* k) {
    if (!j.at(k).is_number())
      throw validation_error(std::string("config key \"") + k + "\" must be a number");
    return j.at(k).get<double>();
  };
  ModelParams p;
  p.lambda = number("lambda");
  p.theta = number("theta");
  p.kappa = number("kappa");
  p.gamma = number("gamma");
  p.p0 = number("p0");
  p.m0 = number("m0");
  if (!j.at("n_agents").is_number_integer())
    throw validation_error("config key \"n_agents\" must be an integer");
  p.n_agents = j.at("n_agents").get<std::int64_t>();
  if (!j.at("mode").is_string())
    throw validation_error("config key \"mode\" must be a string");
  const std::string mode_name = j.at("mode").get<std::string>();
  if (mode_name == "constant_pf")
    return {p, FundamentalMode{ConstantPf{p.p0 - p.gamma}}};
  if (mode_name == "follow_price") return {p, FundamentalMode{FollowPrice{p.gamma}}};
  throw validation_error("config key \"mode\" must be \"constant_pf\" or \"follow_price\"");
}

inline std::pair<ModelParams, FundamentalMode> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("config parse error in " + path + ": " + e.what());
  }
  return parse_config_json(j);
}

inline ordered_json params_to_json(const ModelParams& p, const FundamentalMode& mode) {
  ordered_json j;
  j["lambda"] = p.lambda;
  j["theta"] = p.theta;
  j["kappa"] = p.kappa;
  j["gamma"] = p.gamma;
  j["p0"] = p.p0;
  j["m0"] = p.m0;
  j["n_agents"] = p.n_agents;
  j["mode"] = is_follow_price(mode) ? "follow_price" : "constant_pf";
  return j;
}

// ==============================================================================
// Verdict serialization
// ==============================================================================

inline ordered_json verdict_to_json(const ExtremaVerdict& v) {
  ordered_json j;
  if (std::isinf(v.t_star))
    j["t_star"] = "infinity";
  else
    j["t_star"] = v.t_star;
  j["pattern"] = to_string(v.pattern);
  j["extrema"] = v.extrema;
  ordered_json conds = ordered_json::object();
  for (const auto& [name, value] : v.conditions) conds[name] = value;
  j["conditions"] = conds;
  ordered_json c;
  c["a"] = v.constants.a;
  c["b"] = v.constants.has_b() ? ordered_json(v.constants.b) : ordered_json(nullptr);
  c["c"] = v.constants.has_c() ? ordered_json(v.constants.c) : ordered_json(nullptr);
  c["D"] = v.constants.disc;
  j["constants"] = c;
  return j;
}

// ==============================================================================
// File helpers
// ==============================================================================

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace hiam
