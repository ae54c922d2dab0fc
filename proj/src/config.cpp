#include "ptdiamond/config.hpp"

#include <regex>

namespace ptdiamond {

using namespace detail;

double parse_angle(const std::string& text, const std::string& key) {
  static const std::regex re(R"(^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, re)) {
    double coef = 1.0;
    const std::string c = m[1].str();
    if (c == "-") coef = -1.0;
    else if (!c.empty() && c != "+") coef = std::stod(c);
    double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (den == 0.0) throw ValidationError(key + ": zero denominator");
    return coef * kPi / den;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(key + ": cannot parse angle '" + text + "'");
}


Experiment experiment_from_string(const std::string& s) {
  for (auto e : {Experiment::bands, Experiment::gap, Experiment::cls_check, Experiment::evolve,
                 Experiment::spectrum})
    if (s == to_string(e)) return e;
  if (s == "cls-check") return Experiment::cls_check;
  throw ValidationError("experiment: unknown '" + s + "'");
}

void validate(RunConfig& c) {
  c.model = validated(c.model);
  if (c.output.format != "csv") throw ValidationError("output.format: only csv is supported");
  if (c.output.dir.empty()) throw ValidationError("output.dir: required");
  switch (c.experiment) {
    case Experiment::bands:
    case Experiment::gap:
      if (c.model.e_par != 0.0)
        throw ValidationError("model.e_par: band experiments need e_par = 0");
      if (c.n_k < 16) throw ValidationError("bands.n_k: must be >= 16");
      if (c.n_k > 1024 && c.experiment == Experiment::gap)
        throw ValidationError("bands.n_k: gap classification supports at most 1024 points");
      if (!(c.separation_tolerance > 0.0))
        throw ValidationError("bands.separation_tolerance: must be > 0");
      break;
    case Experiment::cls_check:
      if (c.model.e_par != 0.0) throw ValidationError("model.e_par: cls_check needs e_par = 0");
      if (!std::holds_alternative<std::monostate>(c.initial) &&
          !std::holds_alternative<ClsInitial>(c.initial))
        throw ValidationError("initial: cls_check takes a cls initial condition");
      cls_variant_for(c.model);
      break;
    case Experiment::evolve:
      if (std::holds_alternative<std::monostate>(c.initial))
        throw ValidationError("initial: required for evolve");
      if (const auto* g = std::get_if<GaussianInitial>(&c.initial); g && !(g->sigma > 0.0))
        throw ValidationError("initial.sigma: must be > 0");
      if (std::holds_alternative<ClsInitial>(c.initial)) cls_variant_for(c.model);
      ptdiamond::validate(c.evolve_cfg);
      if (c.max_samples < 2) throw ValidationError("evolve.max_samples: must be >= 2");
      if (!(c.bound_factor >= 1.0)) throw ValidationError("diagnostics.bound_factor: must be >= 1");
      break;
    case Experiment::spectrum:
      if (c.model.cells() > kSpectrumMaxCells)
        throw ValidationError("model: spectrum supports at most 2000 cells");
      if (!(c.im_tolerance > 0.0)) throw ValidationError("spectrum.im_tolerance: must be > 0");
      break;
  }
}

RunConfig parse_config(const nlohmann::json& j) {
  using namespace detail;
  require_object(j, "");
  reject_unknown(j, "", {"label", "experiment", "model", "bands", "spectrum", "initial", "evolve",
                         "diagnostics", "output"});
  RunConfig c;
  if (!j.contains("experiment")) throw ValidationError("experiment: required");
  c.experiment = experiment_from_string(get_string(j["experiment"], "experiment"));
  if (j.contains("label")) c.label = get_string(j["label"], "label");
  if (j.contains("model")) parse_model(j["model"], c.model);
  if (j.contains("bands")) {
    const auto& b = j["bands"];
    require_object(b, "bands");
    reject_unknown(b, "bands", {"n_k", "separation_tolerance"});
    if (b.contains("n_k")) c.n_k = get_int(b["n_k"], "bands.n_k");
    if (b.contains("separation_tolerance"))
      c.separation_tolerance = get_number(b["separation_tolerance"], "bands.separation_tolerance");
  }
  if (j.contains("spectrum")) {
    const auto& s = j["spectrum"];
    require_object(s, "spectrum");
    reject_unknown(s, "spectrum", {"im_tolerance"});
    if (s.contains("im_tolerance"))
      c.im_tolerance = get_number(s["im_tolerance"], "spectrum.im_tolerance");
  }
  if (j.contains("initial")) c.initial = parse_initial(j["initial"]);
  if (j.contains("evolve")) {
    const auto& e = j["evolve"];
    require_object(e, "evolve");
    reject_unknown(e, "evolve", {"z_end", "dz", "sample_every", "overflow_cap", "max_samples"});
    if (e.contains("z_end")) c.evolve_cfg.z_end = get_number(e["z_end"], "evolve.z_end");
    if (e.contains("dz")) c.evolve_cfg.dz = get_number(e["dz"], "evolve.dz");
    if (e.contains("sample_every"))
      c.evolve_cfg.sample_every = get_int(e["sample_every"], "evolve.sample_every");
    if (e.contains("overflow_cap"))
      c.evolve_cfg.overflow_cap = get_number(e["overflow_cap"], "evolve.overflow_cap");
    if (e.contains("max_samples")) c.max_samples = get_int(e["max_samples"], "evolve.max_samples");
  }
  if (j.contains("diagnostics")) {
    const auto& d = j["diagnostics"];
    require_object(d, "diagnostics");
    reject_unknown(d, "diagnostics", {"excited_sites", "bound_factor"});
    if (d.contains("bound_factor"))
      c.bound_factor = get_number(d["bound_factor"], "diagnostics.bound_factor");
    if (d.contains("excited_sites")) {
      const auto& arr = d["excited_sites"];
      if (!arr.is_array()) throw ValidationError("diagnostics.excited_sites: expected an array");
      SiteSet sites;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = "diagnostics.excited_sites[" + std::to_string(i) + "]";
        const auto& e = arr[i];
        if (!e.is_array() || e.size() != 2) throw ValidationError(p + ": expected [n, leg]");
        sites.emplace_back(get_int(e[0], p), leg_from_string(get_string(e[1], p), p));
      }
      c.excited_sites = sites;
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    require_object(o, "output");
    reject_unknown(o, "output", {"dir", "format"});
    if (o.contains("dir")) c.output.dir = get_string(o["dir"], "output.dir");
    if (o.contains("format")) c.output.format = get_string(o["format"], "output.format");
  }
  validate(c);
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace ptdiamond
