// Command-line front end for the diamond-chain simulator.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ptdiamond/ptdiamond.hpp"

namespace {

using nlohmann::json;
using namespace ptdiamond;

struct Flags {
  std::string config;
  std::optional<std::string> label, out;
  std::optional<double> gamma, e_par, e_perp;
  std::optional<std::string> phi;
  std::optional<int> n_min, n_max, n_k;
  std::optional<double> sep_tol, im_tol;
  std::optional<std::string> init, variant, state;
  std::optional<double> a0, sigma, center;
  std::optional<int> anchor;
  std::optional<double> z_end, dz, cap, bound;
  std::optional<int> sample_every, max_samples;
};

void add_model_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run configuration; flags override it");
  app->add_option("--label", f.label);
  app->add_option("--out", f.out, "output directory");
  app->add_option("--gamma", f.gamma, "gain/loss strength");
  app->add_option("--e-par", f.e_par, "longitudinal field");
  app->add_option("--e-perp", f.e_perp, "transverse field");
  app->add_option("--phi", f.phi, "Peierls phase, e.g. pi, pi/2, 0.7");
  app->add_option("--n-min", f.n_min);
  app->add_option("--n-max", f.n_max);
}

void add_band_flags(CLI::App* app, Flags& f) {
  app->add_option("--n-k", f.n_k, "k grid points");
  app->add_option("--separation-tolerance", f.sep_tol);
}

void add_initial_flags(CLI::App* app, Flags& f) {
  app->add_option("--variant", f.variant, "two_site_phipi, two_site_phi0, two_site_phipi_eperp or two_site_phi0_eperp");
  app->add_option("--a0", f.a0, "CLS amplitude (real)");
  app->add_option("--anchor", f.anchor, "CLS anchor cell");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

template <class T>
void set_if(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

RunConfig build(const std::string& experiment, const Flags& f) {
  json j = load_config(f.config);
  if (j.contains("experiment") && j["experiment"] != experiment &&
      !(experiment == "cls_check" && j["experiment"] == "cls-check"))
    throw ValidationError("experiment: config says " + j["experiment"].dump() +
                          " but subcommand is " + experiment);
  j["experiment"] = experiment;
  set_if(j, "label", f.label);
  json& m = j["model"];
  if (m.is_null()) m = json::object();
  set_if(m, "gamma", f.gamma);
  set_if(m, "e_par", f.e_par);
  set_if(m, "e_perp", f.e_perp);
  set_if(m, "phi", f.phi);
  set_if(m, "n_min", f.n_min);
  set_if(m, "n_max", f.n_max);
  if (f.n_k || f.sep_tol) {
    set_if(j["bands"], "n_k", f.n_k);
    set_if(j["bands"], "separation_tolerance", f.sep_tol);
  }
  if (f.im_tol) j["spectrum"]["im_tolerance"] = *f.im_tol;
  if (f.init || f.variant || f.a0 || f.anchor || f.sigma || f.center || f.state) {
    json& i = j["initial"];
    if (i.is_null()) i = json::object();
    if (f.init) i["type"] = *f.init;
    else if (!i.contains("type"))
      i["type"] = f.state ? "custom" : (f.sigma || f.center) ? "gaussian" : "cls";
    set_if(i, "variant", f.variant);
    set_if(i, "a0", f.a0);
    set_if(i, "anchor", f.anchor);
    set_if(i, "sigma", f.sigma);
    set_if(i, "center", f.center);
    set_if(i, "path", f.state);
  }
  if (f.z_end || f.dz || f.sample_every || f.cap || f.max_samples) {
    json& e = j["evolve"];
    set_if(e, "z_end", f.z_end);
    set_if(e, "dz", f.dz);
    set_if(e, "sample_every", f.sample_every);
    set_if(e, "overflow_cap", f.cap);
    set_if(e, "max_samples", f.max_samples);
  }
  if (f.bound) j["diagnostics"]["bound_factor"] = *f.bound;
  if (f.out) j["output"]["dir"] = *f.out;
  return parse_config(j);
}

int report(const RunResult& r, const std::string& what) {
  for (const auto& p : r.files) std::cout << p.string() << '\n';
  if (r.exit_code == kExitOk) std::cerr << what << ": " << r.message << '\n';
  else std::cerr << what << ": error: " << r.message << '\n';
  return r.exit_code;
}

int run_many(const std::vector<RunConfig>& runs, int threads) {
  const auto results = run_all(runs, threads);
  int code = kExitOk;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const int c = report(results[i], runs[i].label.empty() ? "run" : runs[i].label);
    if (c != kExitOk && code == kExitOk) code = c;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for a PT-symmetric diamond-chain waveguide lattice"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Flags f;

  auto* bands = app.add_subcommand("bands", "tracked Bloch band sweep (bands.csv)");
  add_model_flags(bands, f);
  add_band_flags(bands, f);

  auto* gap = app.add_subcommand("gap", "gap / touching-point classification (gap.json)");
  add_model_flags(gap, f);
  add_band_flags(gap, f);

  auto* cls = app.add_subcommand("cls-check", "compact localized state residual");
  add_model_flags(cls, f);
  add_initial_flags(cls, f);

  auto* ev = app.add_subcommand("evolve", "propagate an initial state along z");
  add_model_flags(ev, f);
  add_initial_flags(ev, f);
  ev->add_option("--init", f.init, "cls, gaussian or custom");
  ev->add_option("--sigma", f.sigma, "Gaussian width in cells");
  ev->add_option("--center", f.center, "Gaussian center cell");
  ev->add_option("--state", f.state, "state file for a custom initial condition");
  ev->add_option("--z-end", f.z_end);
  ev->add_option("--dz", f.dz);
  ev->add_option("--sample-every", f.sample_every);
  ev->add_option("--overflow-cap", f.cap);
  ev->add_option("--max-samples", f.max_samples);
  ev->add_option("--bound-factor", f.bound);

  auto* sp = app.add_subcommand("spectrum", "finite-lattice eigenvalues (spectrum.csv)");
  add_model_flags(sp, f);
  sp->add_option("--im-tolerance", f.im_tol);

  std::string scenario_name, scenario_out = "out";
  int threads = 1;
  auto* sc = app.add_subcommand("scenario", "run a built-in figure preset");
  bool list_scenarios = false;
  sc->add_option("name", scenario_name);
  sc->add_option("--out", scenario_out, "output root");
  sc->add_option("--threads", threads, "worker threads for multi-run presets");
  sc->add_flag("--list", list_scenarios, "list preset names");

  std::string sweep_path;
  auto* sw = app.add_subcommand("sweep", "run a list of configurations");
  sw->add_option("config", sweep_path)->required();
  sw->add_option("--threads", threads, "worker threads (overrides the file)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (sc->parsed() && list_scenarios) {
      for (const auto& n : scenario_names()) std::cout << n << '\n';
      return kExitOk;
    }
    if (sc->parsed() && scenario_name.empty()) throw ValidationError("scenario: name required");
    if (sc->parsed()) return run_many(scenario_configs(scenario_name, scenario_out), threads);
    if (sw->parsed()) {
      int file_threads = 1;
      auto runs = parse_sweep(load_config(sweep_path), file_threads);
      if (sw->count("--threads") == 0) threads = file_threads;
      return run_many(runs, threads);
    }
    std::string exp;
    if (bands->parsed()) exp = "bands";
    else if (gap->parsed()) exp = "gap";
    else if (cls->parsed()) exp = "cls_check";
    else if (ev->parsed()) exp = "evolve";
    else exp = "spectrum";
    const RunConfig cfg = build(exp, f);
    return report(run(cfg, &std::cerr), exp);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
