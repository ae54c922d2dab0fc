#include "ptdiamond/runner.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

namespace ptdiamond {

namespace {

nlohmann::json base_meta(const RunConfig& c) {
  nlohmann::json m;
  m["experiment"] = to_string(c.experiment);
  m["label"] = c.label;
  if (!c.scenario.empty()) {
    m["scenario"] = c.scenario;
    m["provenance"] = c.provenance;
  }
  m["model"] = to_json(c.model);
  return m;
}

LatticeState make_initial(const RunConfig& c) {
  if (const auto* cls = std::get_if<ClsInitial>(&c.initial)) {
    // The CLS shape is that of the untilted lattice; E_par only drives it.
    ModelParams untilted = c.model;
    untilted.e_par = 0.0;
    ClsSpec spec = cls->spec;
    if (!cls->variant_given) spec.variant = cls_variant_for(untilted);
    return build_cls(spec, untilted);
  }
  if (const auto* g = std::get_if<GaussianInitial>(&c.initial))
    return gaussian_initial(c.model, g->sigma, g->center);
  if (const auto* custom = std::get_if<CustomInitial>(&c.initial)) {
    LatticeState s = read_state_file(custom->path);
    check_compatible(s, c.model);
    s.z = 0.0;
    return s;
  }
  throw ValidationError("initial: required");
}

nlohmann::json initial_meta(const RunConfig& c) {
  if (const auto* cls = std::get_if<ClsInitial>(&c.initial)) {
    ModelParams untilted = c.model;
    untilted.e_par = 0.0;
    const ClsVariant v = cls->variant_given ? cls->spec.variant : cls_variant_for(untilted);
    return {{"type", "cls"}, {"variant", to_string(v)},
            {"a0", {cls->spec.a0.real(), cls->spec.a0.imag()}}, {"anchor", cls->spec.anchor}};
  }
  if (const auto* g = std::get_if<GaussianInitial>(&c.initial))
    return {{"type", "gaussian"}, {"sigma", g->sigma}, {"center", g->center}};
  if (const auto* custom = std::get_if<CustomInitial>(&c.initial))
    return {{"type", "custom"}, {"path", custom->path}};
  return nullptr;
}

RunResult run_bands(const RunConfig& c) {
  const BandSweep sw = band_sweep(c.model, c.n_k);
  const auto path = std::filesystem::path(c.output.dir) / "bands.csv";
  {
    auto f = open_output(path);
    write_bands_csv(f, sw);
    if (!f) throw IoError("write failed: " + path.string());
  }
  auto meta = base_meta(c);
  meta["n_k"] = c.n_k;
  meta["columns"] = {"k", "re_l1", "im_l1", "re_l2", "im_l2", "re_l3", "im_l3"};
  meta["band_tracking"] = "minimum total displacement between neighbouring k points";
  meta["max_eig_deviation"] = sw.max_eig_deviation;
  meta["near_exceptional_points"] = sw.near_exceptional_points;
  write_metadata(path, meta);
  return {kExitOk, "bands written", {path}};
}

RunResult run_gap(const RunConfig& c) {
  const BandSweep sw = band_sweep(c.model, c.n_k);
  const GapReport rep = classify_gaps(sw, c.separation_tolerance);
  nlohmann::json j;
  j["has_flat_band"] = rep.has_flat_band;
  j["flat_band"] = rep.flat_band;
  j["is_gapless"] = rep.is_gapless;
  j["min_separation"] = rep.min_separation;
  j["gamma_c"] = rep.gamma_c;
  j["separation_tolerance"] = c.separation_tolerance;
  j["touching_points"] = nlohmann::json::array();
  for (const auto& t : rep.touching_points)
    j["touching_points"].push_back({{"band_n", t.band_n}, {"k_n", t.k_n}, {"band_m", t.band_m},
                                    {"k_m", t.k_m}, {"separation", t.separation}});
  const auto path = std::filesystem::path(c.output.dir) / "gap.json";
  {
    auto f = open_output(path);
    f << j.dump(2) << '\n';
    if (!f) throw IoError("write failed: " + path.string());
  }
  auto meta = base_meta(c);
  meta["n_k"] = c.n_k;
  write_metadata(path, meta);
  return {kExitOk, rep.is_gapless ? "gapless" : "isolated", {path}};
}

RunResult run_cls_check(const RunConfig& c) {
  ClsSpec spec;
  if (const auto* cls = std::get_if<ClsInitial>(&c.initial)) spec = cls->spec;
  if (const auto* cls = std::get_if<ClsInitial>(&c.initial); !cls || !cls->variant_given)
    spec.variant = cls_variant_for(c.model);
  const LatticeState s = build_cls(spec, c.model);
  const double res = cls_residual(s, c.model);
  const auto path = std::filesystem::path(c.output.dir) / "cls_check.csv";
  {
    auto f = open_output(path);
    f << "variant,anchor,a0_re,a0_im,residual\n"
      << to_string(spec.variant) << ',' << spec.anchor << ',' << fmt_num(spec.a0.real()) << ','
      << fmt_num(spec.a0.imag()) << ',' << fmt_num(res) << '\n';
    if (!f) throw IoError("write failed: " + path.string());
  }
  auto meta = base_meta(c);
  meta["columns"] = {"variant", "anchor", "a0_re", "a0_im", "residual"};
  meta["residual_definition"] = "||H psi|| / ||psi||";
  write_metadata(path, meta);
  return {kExitOk, "residual " + fmt_num(res), {path}};
}

RunResult run_spectrum(const RunConfig& c) {
  const SpectrumReport rep = finite_spectrum(c.model, c.im_tolerance);
  const auto path = std::filesystem::path(c.output.dir) / "spectrum.csv";
  {
    auto f = open_output(path);
    write_spectrum_csv(f, rep);
    if (!f) throw IoError("write failed: " + path.string());
  }
  auto meta = base_meta(c);
  meta["columns"] = {"index", "re", "im"};
  meta["sort"] = "ascending real part, then imaginary part";
  meta["im_tolerance"] = c.im_tolerance;
  meta["complex_count"] = rep.complex_count;
  meta["complex_indices"] = rep.complex_indices;
  write_metadata(path, meta);
  return {kExitOk, "complex_count " + std::to_string(rep.complex_count), {path}};
}

RunResult run_evolve(const RunConfig& c, std::ostream* progress) {
  const LatticeState init = make_initial(c);
  SiteSet excited;
  if (c.excited_sites) excited = *c.excited_sites;
  else if (const auto* cls = std::get_if<ClsInitial>(&c.initial)) excited = cls_support(cls->spec.anchor);

  EvolveConfig cfg = c.evolve_cfg;
  const double steps = std::ceil(cfg.z_end / cfg.dz - 1e-9);
  const int min_stride = static_cast<int>(std::ceil(steps / (c.max_samples - 1)));
  cfg.sample_every = std::max(cfg.sample_every, min_stride);

  const std::filesystem::path dir(c.output.dir);
  const auto heat_path = dir / "intensity.csv";
  const auto diag_path = dir / "diagnostics.csv";
  const auto final_path = dir / "final_state.csv";
  auto heat = open_output(heat_path);
  auto diag = open_output(diag_path);
  heat << kIntensityHeader;
  diag << kDiagnosticsHeader;

  DiagnosticsSeries ds;
  LatticeState last;
  const double report_every = cfg.z_end / 10.0;
  double next_report = report_every;
  EvolveSummary sum = evolve_streaming(init, c.model, cfg, [&](const LatticeState& s) {
    write_intensity_rows(heat, intensity(s));
    const DiagnosticsPoint d = diagnose(s, excited);
    write_diagnostics_row(diag, d);
    ds.points.push_back(d);
    last = s;
    if (progress && s.z >= next_report) {
      *progress << "  z = " << s.z << " / " << cfg.z_end << '\n';
      next_report += report_every;
    }
  });
  heat.close();
  diag.close();
  if (!heat || !diag) throw IoError("write failed under " + dir.string());
  {
    auto f = open_output(final_path);
    write_state(f, last);
    if (!f) throw IoError("write failed: " + final_path.string());
  }

  const OscillationMetrics om = oscillation_metrics(ds, c.bound_factor);
  auto meta = base_meta(c);
  meta["initial"] = initial_meta(c);
  meta["integrator"] = {{"method", sum.meta.method},
                        {"dz", c.evolve_cfg.dz},
                        {"step", sum.meta.step},
                        {"steps", sum.meta.steps},
                        {"z_end", cfg.z_end},
                        {"sample_every", cfg.sample_every},
                        {"overflow_cap", cfg.overflow_cap},
                        {"spectral_radius_estimate", sum.meta.spectral_radius},
                        {"local_error_estimate", sum.meta.local_error_estimate}};
  meta["status"] = to_string(sum.status);
  meta["z_stop"] = sum.z_stop;
  meta["excited_sites"] = nlohmann::json::array();
  for (const auto& [n, leg] : excited)
    meta["excited_sites"].push_back({n, std::string(1, "abc"[static_cast<int>(leg)])});
  meta["oscillation"] = {{"period_z", om.period_z ? nlohmann::json(*om.period_z) : nlohmann::json()},
                         {"amplitude", om.amplitude},
                         {"is_bounded", om.is_bounded},
                         {"bound_factor", c.bound_factor}};

  auto m1 = meta;
  m1["columns"] = {"z", "n", "rho"};
  write_metadata(heat_path, m1);
  auto m2 = meta;
  m2["columns"] = {"z", "total_power", "com", "asymmetry", "width", "excited_power",
                   "complement_power"};
  write_metadata(diag_path, m2);
  auto m3 = meta;
  m3["format"] = "state file: '# z=<value>' line, header, one row per cell";
  write_metadata(final_path, m3);

  RunResult r{kExitOk, "completed", {heat_path, diag_path, final_path}};
  if (sum.status == EvolveStatus::blew_up) {
    r.exit_code = kExitBlowUp;
    r.message = "blow-up detected at z=" + fmt_num(sum.z_stop);
  }
  return r;
}

}  // namespace

RunResult run(RunConfig config, std::ostream* progress) {
  try {
    validate(config);
    switch (config.experiment) {
      case Experiment::bands: return run_bands(config);
      case Experiment::gap: return run_gap(config);
      case Experiment::cls_check: return run_cls_check(config);
      case Experiment::spectrum: return run_spectrum(config);
      case Experiment::evolve: return run_evolve(config, progress);
    }
  } catch (const ValidationError& e) {
    return {kExitValidation, e.what(), {}};
  } catch (const NumericalError& e) {
    return {kExitNumerical, e.what(), {}};
  } catch (const IoError& e) {
    return {kExitIo, e.what(), {}};
  }
  return {kExitValidation, "unknown experiment", {}};
}

std::vector<RunConfig> parse_sweep(const nlohmann::json& j, int& threads) {
  detail::require_object(j, "sweep");
  detail::reject_unknown(j, "sweep", {"threads", "runs", "output_root"});
  threads = j.contains("threads") ? detail::get_int(j["threads"], "sweep.threads") : 1;
  if (threads < 1) throw ValidationError("sweep.threads: must be >= 1");
  const std::string root =
      j.contains("output_root") ? detail::get_string(j["output_root"], "sweep.output_root") : "out";
  if (!j.contains("runs") || !j["runs"].is_array())
    throw ValidationError("sweep.runs: expected an array");
  std::vector<RunConfig> runs;
  for (std::size_t i = 0; i < j["runs"].size(); ++i) {
    const auto& r = j["runs"][i];
    const std::string path = "sweep.runs[" + std::to_string(i) + "]";
    try {
      if (r.is_object() && r.contains("scenario")) {
        detail::reject_unknown(r, "", {"scenario"});
        for (auto& c : scenario_configs(detail::get_string(r["scenario"], "scenario"), root))
          runs.push_back(std::move(c));
      } else {
        runs.push_back(parse_config(r));
      }
    } catch (const ValidationError& e) {
      throw ValidationError(path + "." + e.what());
    }
  }
  std::set<std::string> dirs;
  for (const auto& r : runs)
    if (!dirs.insert(std::filesystem::weakly_canonical(r.output.dir).string()).second)
      throw ValidationError("sweep: two runs write to " + r.output.dir);
  return runs;
}

std::vector<RunResult> run_all(const std::vector<RunConfig>& runs, int threads) {
  std::vector<RunResult> results(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) results[i] = run(runs[i]);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(runs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace ptdiamond
