#include "ptdiamond/config.hpp"

namespace ptdiamond {

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "fig2_bands", "fig2c_cls", "fig3a", "fig3b", "fig3c", "fig3d", "fig4",
      "fig5cd",     "fig5ef",    "fig6",  "fig7a", "fig7b", "fig7cd"};
  return names;
}

std::vector<RunConfig> scenario_configs(const std::string& name,
                                               const std::string& out_root) {
  RunConfig base;
  base.scenario = name;
  base.label = name;
  base.model.gamma = 0.05;
  base.model.phi = kPi;
  base.output.dir = out_root + "/" + name;
  // Figure captions give no z ranges for Figs. 3 and 5; these are chosen defaults.
  auto cls_run = [&](double e_par, double e_perp, double z_end, const char* prov) {
    RunConfig c = base;
    c.experiment = Experiment::evolve;
    c.model.e_par = e_par;
    c.model.e_perp = e_perp;
    c.initial = ClsInitial{};
    c.evolve_cfg.z_end = z_end;
    c.provenance = prov;
    return c;
  };
  auto gauss_run = [&](double phi, double e_par, double z_end, const char* prov) {
    RunConfig c = base;
    c.experiment = Experiment::evolve;
    c.model.phi = phi;
    c.model.e_par = e_par;
    c.initial = GaussianInitial{70.0, 0.0};
    c.evolve_cfg.z_end = z_end;
    c.provenance = prov;
    return c;
  };

  std::vector<RunConfig> out;
  if (name == "fig2_bands") {
    RunConfig c = base;
    c.experiment = Experiment::bands;
    c.provenance = "Fig. 2(a,b): phi=pi, gamma=0.05, E_par=E_perp=0";
    out.push_back(c);
  } else if (name == "fig2c_cls") {
    out.push_back(cls_run(0.0, 0.0, 100.0, "Fig. 2(c): CLS with A0=1, phi=pi, gamma=0.05, no fields"));
  } else if (name == "fig3a") {
    out.push_back(cls_run(0.05, 0.0, 500.0, "Fig. 3(a): CLS, E_par=0.05, gamma=0.05, phi=pi"));
  } else if (name == "fig3b") {
    out.push_back(gauss_run(kPi, 0.05, 500.0, "Fig. 3(b): Gaussian sigma=70, E_par=0.05, gamma=0.05, phi=pi"));
  } else if (name == "fig3c") {
    out.push_back(cls_run(0.1, 0.0, 500.0, "Fig. 3(c): CLS, E_par=0.1, gamma=0.05, phi=pi"));
  } else if (name == "fig3d") {
    out.push_back(gauss_run(kPi, 0.1, 500.0, "Fig. 3(d): Gaussian sigma=70, E_par=0.1, gamma=0.05, phi=pi"));
  } else if (name == "fig4") {
    for (double e : {0.01, 0.05}) {
      RunConfig c = base;
      c.experiment = Experiment::bands;
      c.model.e_perp = e;
      c.label = name + (e == 0.01 ? "_eperp0.01" : "_eperp0.05");
      c.output.dir = base.output.dir + (e == 0.01 ? "/eperp0.01" : "/eperp0.05");
      c.provenance = "Fig. 4: gamma=0.05, phi=pi, E_par=0, E_perp in {0.01, 0.05}";
      out.push_back(c);
    }
  } else if (name == "fig5cd") {
    out.push_back(cls_run(0.1, 0.01, 2000.0, "Fig. 5(c,d): CLS, E_perp=0.01, E_par=0.1, phi=pi, gamma=0.05"));
  } else if (name == "fig5ef") {
    out.push_back(cls_run(0.1, 0.05, 2000.0, "Fig. 5(e,f): CLS, E_perp=0.05, E_par=0.1, phi=pi, gamma=0.05"));
  } else if (name == "fig6") {
    const std::pair<double, const char*> phis[] = {
        {kPi / 2.0, "pi_2"}, {kPi / 3.0, "pi_3"}, {kPi / 4.0, "pi_4"}};
    for (const auto& [phi, tag] : phis) {
      RunConfig c = base;
      c.experiment = Experiment::bands;
      c.model.phi = phi;
      c.label = name + "_phi_" + tag;
      c.output.dir = base.output.dir + "/phi_" + tag;
      c.provenance = "Fig. 6: gamma=0.05, E_par=E_perp=0, phi in {pi/2, pi/3, pi/4}";
      out.push_back(c);
    }
  } else if (name == "fig7a") {
    out.push_back(gauss_run(kPi / 2.0, 0.05, 500.0, "Fig. 7(a): Gaussian sigma=70, E_par=0.05, gamma=0.05, E_perp=0, phi=pi/2"));
  } else if (name == "fig7b") {
    out.push_back(gauss_run(kPi / 2.0, 0.1, 500.0, "Fig. 7(b): Gaussian sigma=70, E_par=0.1, gamma=0.05, E_perp=0, phi=pi/2"));
  } else if (name == "fig7cd") {
    RunConfig c = base;
    c.experiment = Experiment::spectrum;
    c.model.phi = kPi / 2.0;
    c.model.e_par = 0.05;
    c.provenance = "Fig. 7(c,d): 301 cells (903 sites), E_par=0.05, gamma=0.05, E_perp=0, phi=pi/2";
    out.push_back(c);
  } else {
    throw ValidationError("scenario: unknown '" + name + "'");
  }
  for (auto& c : out) validate(c);
  return out;
}

}  // namespace ptdiamond
