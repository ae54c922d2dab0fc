/**
 * @file config.hpp
 * @brief Run configuration: JSON parsing with strict key checking, and the
 *        built-in scenario presets.
 */
#pragma once

#include <json.hpp>

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ptdiamond/bands.hpp"
#include "ptdiamond/cls.hpp"
#include "ptdiamond/diagnostics.hpp"
#include "ptdiamond/evolve.hpp"
#include "ptdiamond/model.hpp"

namespace ptdiamond {

enum class Experiment { bands, gap, cls_check, evolve, spectrum };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::bands: return "bands";
    case Experiment::gap: return "gap";
    case Experiment::cls_check: return "cls_check";
    case Experiment::evolve: return "evolve";
    case Experiment::spectrum: return "spectrum";
  }
  return "?";
}

struct ClsInitial {
  ClsSpec spec;
  bool variant_given = false;  ///< otherwise picked from phi and e_perp
};
struct GaussianInitial {
  double sigma = 70.0;
  double center = 0.0;
};
struct CustomInitial {
  std::string path;
};
using InitialCondition = std::variant<std::monostate, ClsInitial, GaussianInitial, CustomInitial>;

struct OutputSpec {
  std::string dir = "out";
  std::string format = "csv";
};

struct RunConfig {
  std::string label;
  std::string scenario;    ///< preset name, empty for user configs
  std::string provenance;  ///< where preset constants come from
  Experiment experiment = Experiment::bands;
  ModelParams model;
  int n_k = 401;
  double separation_tolerance = kDefaultSeparationTolerance;
  double im_tolerance = kDefaultImTolerance;
  InitialCondition initial;
  EvolveConfig evolve_cfg{100.0, 0.01, 10, 1e12};
  int max_samples = 2000;
  double bound_factor = kDefaultBoundFactor;
  std::optional<SiteSet> excited_sites;
  OutputSpec output;
};

/// "pi", "-pi/2", "3pi/4", "0.5*pi" or a plain number.
double parse_angle(const std::string& text, const std::string& key);

namespace detail {

using json = nlohmann::json;

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError((path.empty() ? "config" : path) + ": expected an object");
}

inline void reject_unknown(const json& j, const std::string& path,
                           std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k))
      throw ValidationError((path.empty() ? k : path + "." + k) + ": unknown key");
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path + ": expected a number");
  return j.get<double>();
}

inline int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path + ": expected an integer");
  return j.get<int>();
}

inline std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path + ": expected a string");
  return j.get<std::string>();
}

inline cplx get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError(path + ": expected a number or [re, im]");
}

inline Leg leg_from_string(const std::string& s, const std::string& path) {
  if (s == "a") return Leg::a;
  if (s == "b") return Leg::b;
  if (s == "c") return Leg::c;
  throw ValidationError(path + ": leg must be a, b or c");
}

inline void parse_model(const json& j, ModelParams& m) {
  require_object(j, "model");
  reject_unknown(j, "model", {"gamma", "e_par", "e_perp", "phi", "n_min", "n_max", "boundary"});
  if (j.contains("gamma")) m.gamma = get_number(j["gamma"], "model.gamma");
  if (j.contains("e_par")) m.e_par = get_number(j["e_par"], "model.e_par");
  if (j.contains("e_perp")) m.e_perp = get_number(j["e_perp"], "model.e_perp");
  if (j.contains("phi")) {
    const auto& v = j["phi"];
    m.phi = v.is_string() ? parse_angle(v.get<std::string>(), "model.phi")
                          : get_number(v, "model.phi");
  }
  if (j.contains("n_min")) m.n_min = get_int(j["n_min"], "model.n_min");
  if (j.contains("n_max")) m.n_max = get_int(j["n_max"], "model.n_max");
  if (j.contains("boundary") && get_string(j["boundary"], "model.boundary") != "open")
    throw ValidationError("model.boundary: only \"open\" is supported");
}

inline InitialCondition parse_initial(const json& j) {
  require_object(j, "initial");
  if (!j.contains("type")) throw ValidationError("initial.type: required");
  const std::string type = get_string(j["type"], "initial.type");
  if (type == "cls") {
    reject_unknown(j, "initial", {"type", "variant", "a0", "anchor"});
    ClsInitial c;
    if (j.contains("variant")) {
      c.spec.variant = cls_variant_from_string(get_string(j["variant"], "initial.variant"));
      c.variant_given = true;
    }
    if (j.contains("a0")) c.spec.a0 = get_complex(j["a0"], "initial.a0");
    if (j.contains("anchor")) c.spec.anchor = get_int(j["anchor"], "initial.anchor");
    return c;
  }
  if (type == "gaussian") {
    reject_unknown(j, "initial", {"type", "sigma", "center"});
    GaussianInitial g;
    if (j.contains("sigma")) g.sigma = get_number(j["sigma"], "initial.sigma");
    if (j.contains("center")) g.center = get_number(j["center"], "initial.center");
    return g;
  }
  if (type == "custom") {
    reject_unknown(j, "initial", {"type", "path"});
    if (!j.contains("path")) throw ValidationError("initial.path: required for custom");
    return CustomInitial{get_string(j["path"], "initial.path")};
  }
  throw ValidationError("initial.type: expected cls, gaussian or custom");
}

}  // namespace detail

Experiment experiment_from_string(const std::string& s);

/// Experiment-specific checks; called after parsing and before any compute.
void validate(RunConfig& c);

/// Strict parse: unknown keys and wrong types are errors naming the key path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);

const std::vector<std::string>& scenario_names();

/// Expands a preset into one or more runs writing below `out_root`.
std::vector<RunConfig> scenario_configs(const std::string& name, const std::string& out_root = "out");

}  // namespace ptdiamond
