/**
 * @brief Experiment configuration read from a JSON document.
 *
 * A document may name a preset ("example1", "example2", "zero"); the preset
 * supplies every field and any key present in the document overrides it.
 * The resolved document (preset merged with overrides, defaults filled in)
 * is what gets hashed and stamped on output files.
 *
 *     {
 *       "preset": "example1",
 *       "material": {"lambda": 2, "mu": 1, "rho": 1},
 *       "omega": 0.1,
 *       "geometry": {"n": 32, "N": 41},
 *       "basis": {"K": 5},
 *       "incidents": {"mode": "p", "angles": [0, 1.5707963267948966, ...]},
 *       "directions": 64,
 *       "noise": {"delta": 0.03, "seed": 1},
 *       "inversion": {"initial_lambda": 0.5, "alpha0": 0.001, "ratio": 0.5, "max_iter": 4},
 *       "target": "example1",          // or "example2", "zero", {"coefficients": [[...], ...]}
 *       "synthesis_N": 61,             // optional finer grid for the data
 *       "eshelby": {"R": 256, "radius": 0.25, "kappa_star": 2, "mu_star": 2,
 *                   "eps_inc": [1, 0, 0], "method": "richardson", "tol": 1e-8, "max_iter": 10000},
 *       "output": "out/example1"
 *     }
 */
#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "elscat/inverse.hpp"
#include "elscat/static_eshelby.hpp"

namespace elscat {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::json;

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct EshelbyConfig {
  std::size_t R = 256;
  double radius = 0.25;
  double kappa_star = 2.0;
  double mu_star = 2.0;
  Tensor2 eps_inc = (Tensor2() << 1.0, 0.0, 0.0, 0.0).finished();
  EshelbyMethod method = EshelbyMethod::Richardson;
  double tol = 1e-8;
  int max_iter = 10000;
};

struct ExperimentConfig {
  InversionConfig inv;
  /// "example1", "example2", "zero" or "coefficients"
  std::string target = "example1";
  Eigen::MatrixXd target_coeffs;
  EshelbyConfig eshelby;
  std::string output = "out";
  /// The resolved document.
  Json resolved;

  /// FNV-1a of the resolved document without the output directory, so the
  /// same experiment written to two places stamps the same hash.
  std::string hash() const {
    Json h = resolved;
    h.erase("output");
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << fnv1a(h.dump());
    return os.str();
  }

  /// Ground-truth lambda*(x) of the target.
  std::function<ScalarSample(const Vec2&)> truth() const {
    if (target == "example1")
      return [](const Vec2& x) {
        const double e = std::exp(-kPi * x.squaredNorm());
        return ScalarSample{e, -2.0 * kPi * e * x};
      };
    if (target == "example2")
      return [](const Vec2& x) {
        const Vec2 d = x - Vec2(0.5, 0.0);
        const double e = std::exp(-15.0 * kPi * d.squaredNorm());
        return ScalarSample{e, -30.0 * kPi * e * d};
      };
    if (target == "zero") {
      const double lam = inv.material.lambda;
      return [lam](const Vec2&) { return ScalarSample{lam, Vec2::Zero()}; };
    }
    const LambdaField f{static_cast<int>(target_coeffs.rows()), target_coeffs};
    return [f](const Vec2& x) { return f.sample(x); };
  }
};

namespace detail {

inline Json preset_document(const std::string& name) {
  Json d = {
      {"material", {{"lambda", 2.0}, {"mu", 1.0}, {"rho", 1.0}}},
      {"omega", 0.1},
      {"geometry", {{"n", 32}, {"N", 41}}},
      {"basis", {{"K", 5}}},
      {"incidents", {{"mode", "p"}, {"angles", {0.0, 0.5 * kPi, kPi, 1.5 * kPi}}}},
      {"directions", 64},
      {"noise", {{"delta", 0.0}, {"seed", 1}}},
      {"inversion", {{"initial_lambda", 0.5}, {"alpha0", 1e-3}, {"ratio", 0.5}, {"max_iter", 2}}},
      {"target", "example1"},
      {"eshelby",
       {{"R", 256},
        {"radius", 0.25},
        {"kappa_star", 2.0},
        {"mu_star", 2.0},
        {"eps_inc", {1.0, 0.0, 0.0}},
        {"method", "richardson"},
        {"tol", 1e-8},
        {"max_iter", 10000}}},
      {"output", "out"},
  };
  if (name == "example1") return d;
  if (name == "example2") {
    d["material"]["lambda"] = 1.0;
    d["inversion"]["max_iter"] = 3;
    d["target"] = "example2";
    return d;
  }
  if (name == "zero") {
    d["target"] = "zero";
    return d;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace detail

/// Resolves a document against its preset (example1 when none is named).
inline ExperimentConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const std::string preset = doc.contains("preset") ? detail::get<std::string>(doc, "preset") : "example1";
  Json r = detail::preset_document(preset);
  r.merge_patch(doc);
  r["preset"] = preset;

  ExperimentConfig c;
  using detail::get;
  const Json& m = r.at("material");
  c.inv.material = {get<double>(m, "lambda"), get<double>(m, "mu"), get<double>(m, "rho")};
  c.inv.omega = get<double>(r, "omega");
  c.inv.n = get<int>(r.at("geometry"), "n");
  c.inv.N = get<int>(r.at("geometry"), "N");
  c.inv.K = get<int>(r.at("basis"), "K");
  const std::string mode = get<std::string>(r.at("incidents"), "mode");
  if (mode != "p" && mode != "s") throw ConfigError("incidents.mode must be \"p\" or \"s\"");
  c.inv.incident_kind = mode == "p" ? WaveKind::P : WaveKind::S;
  c.inv.incident_angles = get<std::vector<double>>(r.at("incidents"), "angles");
  const int M = get<int>(r, "directions");
  if (M < 1) throw ConfigError("directions must be positive");
  c.inv.directions = static_cast<std::size_t>(M);
  c.inv.delta = get<double>(r.at("noise"), "delta");
  c.inv.seed = get<std::uint64_t>(r.at("noise"), "seed");
  const Json& in = r.at("inversion");
  c.inv.initial_lambda = get<double>(in, "initial_lambda");
  c.inv.alpha0 = get<double>(in, "alpha0");
  c.inv.alpha_ratio = get<double>(in, "ratio");
  c.inv.max_iter = get<int>(in, "max_iter");
  if (r.contains("synthesis_N") && !r["synthesis_N"].is_null()) c.inv.synthesis_N = get<int>(r, "synthesis_N");

  const Json& t = r.at("target");
  if (t.is_string()) {
    c.target = t.get<std::string>();
    if (c.target != "example1" && c.target != "example2" && c.target != "zero")
      throw ConfigError("target must be example1, example2, zero or {\"coefficients\": ...}");
  } else if (t.is_object() && t.contains("coefficients")) {
    const auto rows = get<std::vector<std::vector<double>>>(t, "coefficients");
    if (static_cast<int>(rows.size()) != c.inv.K) throw ConfigError("target coefficients must be K x K");
    c.target = "coefficients";
    c.target_coeffs.resize(c.inv.K, c.inv.K);
    for (int k = 0; k < c.inv.K; ++k) {
      if (static_cast<int>(rows[static_cast<std::size_t>(k)].size()) != c.inv.K)
        throw ConfigError("target coefficients must be K x K");
      for (int j = 0; j < c.inv.K; ++j) c.target_coeffs(k, j) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }
  } else {
    throw ConfigError("target must be a preset name or {\"coefficients\": ...}");
  }

  const Json& e = r.at("eshelby");
  const int R = get<int>(e, "R");
  if (R < 1) throw ConfigError("eshelby.R must be positive");
  c.eshelby.R = static_cast<std::size_t>(R);
  c.eshelby.radius = get<double>(e, "radius");
  c.eshelby.kappa_star = get<double>(e, "kappa_star");
  c.eshelby.mu_star = get<double>(e, "mu_star");
  const auto eps = get<std::vector<double>>(e, "eps_inc");
  if (eps.size() != 3) throw ConfigError("eshelby.eps_inc must be [e11, e22, e12]");
  c.eshelby.eps_inc << eps[0], eps[2], eps[2], eps[1];
  const std::string method = get<std::string>(e, "method");
  if (method != "richardson" && method != "direct") throw ConfigError("eshelby.method must be richardson or direct");
  c.eshelby.method = method == "direct" ? EshelbyMethod::Direct : EshelbyMethod::Richardson;
  c.eshelby.tol = get<double>(e, "tol");
  c.eshelby.max_iter = get<int>(e, "max_iter");
  if (!(c.eshelby.radius > 0.0) || !(c.eshelby.tol > 0.0) || c.eshelby.max_iter < 1)
    throw ConfigError("eshelby: radius, tol and max_iter must be positive");

  c.output = get<std::string>(r, "output");

  try {
    c.inv.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  c.resolved = r;
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(doc);
}

/// Overrides the noise seed and refreshes the resolved document.
inline void override_seed(ExperimentConfig& c, std::uint64_t seed) {
  c.inv.seed = seed;
  c.resolved["noise"]["seed"] = seed;
}

inline void override_output(ExperimentConfig& c, const std::string& dir) {
  c.output = dir;
  c.resolved["output"] = dir;
}

}  // namespace elscat
