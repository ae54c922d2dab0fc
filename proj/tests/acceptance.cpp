// Acceptance suite: one PASS/FAIL line per criterion with the measured values.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ptdiamond/ptdiamond.hpp"

using namespace ptdiamond;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

ModelParams params(double gamma, double e_par, double e_perp, double phi, int n_min = -150,
                   int n_max = 150) {
  ModelParams p;
  p.gamma = gamma;
  p.e_par = e_par;
  p.e_perp = e_perp;
  p.phi = phi;
  p.n_min = n_min;
  p.n_max = n_max;
  return p;
}

// Runs an evolution and returns its diagnostics without storing states.
struct RunDiag {
  DiagnosticsSeries series;
  EvolveSummary summary;
};

RunDiag run_diag(const LatticeState& init, const ModelParams& p, double z_end, const SiteSet& excited,
                 int sample_every = 100) {
  RunDiag r;
  r.summary = evolve_streaming(init, p, {z_end, 0.01, sample_every, 1e12},
                               [&](const LatticeState& s) { r.series.points.push_back(diagnose(s, excited)); });
  return r;
}

double max_abs_asymmetry(const DiagnosticsSeries& s) {
  double m = 0;
  for (const auto& d : s.points) m = std::max(m, std::abs(d.asymmetry));
  return m;
}

double power_at(const DiagnosticsSeries& s, double z) {
  for (const auto& d : s.points)
    if (std::abs(d.z - z) < 1e-6) return d.total_power;
  return NAN;
}

Outcome crit1() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0, 1);
  const auto grid = uniform_k_grid(401);
  double worst = 0;
  for (int draw = 0; draw < 200; ++draw) {
    const auto p = params(3 * u(rng), 0, 0.1 * u(rng), kTwoPi * u(rng));
    for (double k : grid) {
      const auto roots = solve_cubic(characteristic_coefficients(p, k)).roots;
      worst = std::max(worst, triple_distance(roots, bloch_eigenvalues(p, k)));
    }
  }
  return {worst < 1e-9, fmt("max |cubic - eig| = %.3e (tol 1e-9)", worst)};
}

Outcome crit2() {
  const auto sw = band_sweep(params(0.05, 0, 0, kPi), 401);
  const auto rep = classify_gaps(sw);
  double flat_max = INFINITY;
  int flat = -1;
  for (int b = 0; b < 3; ++b) {
    double m = 0;
    for (std::size_t i = 0; i < sw.size(); ++i) m = std::max(m, std::abs(sw.band(b, i)));
    if (m < flat_max) { flat_max = m; flat = b; }
  }
  const double kstar = std::acos(1 - 0.05 * 0.05 / 4);
  // Dispersive bands must be real exactly outside the complex window, and the
  // window edge must sit within one grid cell of k*.
  bool structure = true;
  double edge = 0;
  for (std::size_t i = 0; i < sw.size(); ++i) {
    bool cplx_here = false;
    for (int b = 0; b < 3; ++b)
      if (b != flat && sw.band(b, i).imag() != 0.0) cplx_here = true;
    if (cplx_here) edge = std::max(edge, std::abs(sw.grid[i]));
    if (cplx_here != (std::abs(sw.grid[i]) < kstar)) structure = false;
  }
  const double dk = sw.grid[1] - sw.grid[0];
  const bool edge_ok = edge < kstar && kstar - edge <= dk;
  const bool pass = rep.has_flat_band && flat_max < 1e-12 && structure && edge_ok;
  return {pass, "flat max|lambda| = " + fmt("%.1e", flat_max) + ", last complex k = " +
                    fmt("%.5f", edge) + ", k* = " + fmt("%.5f", kstar) + ", dk = " + fmt("%.5f", dk)};
}

Outcome crit3() {
  const double gc = 2 * std::sqrt(2.0);
  const std::pair<double, bool> cases[] = {{2.0, true}, {gc - 0.01, true}, {gc + 0.01, false}, {3.0, false}};
  bool pass = true;
  std::string d;
  for (const auto& [g, expect] : cases) {
    const auto rep = classify_gaps(band_sweep(params(g, 0, 0, kPi), 401));
    pass = pass && rep.is_gapless == expect && rep.has_flat_band;
    d += fmt("g=%.4f:", g) + (rep.is_gapless ? "gapless" : "isolated") + fmt("(%.1e) ", rep.min_separation);
  }
  return {pass, d};
}

Outcome crit4() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const double gamma = 3 * u(rng), e_perp = 0.1 * u(rng);
    const cplx a0(4 * u(rng) - 2, 4 * u(rng) - 2);
    const int anchor = static_cast<int>(40 * u(rng)) - 20;
    for (auto v : {ClsVariant::two_site_phi0, ClsVariant::two_site_phipi,
                   ClsVariant::two_site_phi0_eperp, ClsVariant::two_site_phipi_eperp}) {
      const auto p = params(gamma, 0, is_eperp_variant(v) ? e_perp : 0.0, is_pi_variant(v) ? kPi : 0.0, -25, 25);
      worst = std::max(worst, cls_residual(build_cls({v, a0, anchor}, p), p));
    }
  }
  const auto p = params(0.05, 0, 0, kPi, -25, 25);
  auto sum = LatticeState::zeros(p);
  for (int s = -25; s < 25; ++s)
    sum.amps += build_cls({ClsVariant::two_site_phipi, cplx(u(rng) - 0.5, u(rng) - 0.5), s}, p).amps;
  const double sup = cls_residual(sum, p);
  return {worst < 1e-12 && sup < 1e-11,
          fmt("max residual = %.2e (tol 1e-12)", worst) + fmt(", superposition = %.2e (tol 1e-11)", sup)};
}

Outcome crit5() {
  const auto p = params(0.05, 0, 0, kPi);
  const auto init = build_cls({}, p);
  const auto rho0 = intensity(init).rho;
  double worst = 0;
  evolve_streaming(init, p, {100.0, 0.01, 100, 1e12}, [&](const LatticeState& s) {
    const auto r = intensity(s).rho;
    for (std::size_t i = 0; i < r.size(); ++i) worst = std::max(worst, std::abs(r[i] - rho0[i]));
  });
  return {worst < 1e-6, fmt("max |rho(z) - rho(0)| = %.2e (tol 1e-6)", worst)};
}

Outcome crit6() {
  std::mt19937_64 rng(606);
  std::normal_distribution<double> nd;
  const auto p = params(0.05, 0.05, 0, kPi / 2, -5, 5);
  auto init = LatticeState::zeros(p);
  for (auto& v : init.amps) v = cplx(nd(rng), nd(rng));
  auto rk4 = [&](double z, double dz) {
    return evolve(init, p, {z, dz, 1 << 30, 1e12}).samples.back();
  };
  const auto ref50 = evolve_oracle(init, p, 50.0);
  const double err = (rk4(50.0, 0.01).amps - ref50.amps).norm() / ref50.amps.norm();
  const auto ref10 = evolve_oracle(init, p, 10.0);
  const double e1 = (rk4(10.0, 0.2).amps - ref10.amps).norm();
  const double e2 = (rk4(10.0, 0.1).amps - ref10.amps).norm();
  const double order = std::log2(e1 / e2);
  return {err < 1e-7 && order >= 3.7 && order <= 4.3,
          fmt("rel err = %.2e (tol 1e-7)", err) + fmt(", order = %.3f", order)};
}

Outcome crit7() {
  bool pass = true;
  std::string d;
  for (double e_par : {0.05, 0.1}) {
    const auto init = build_cls({}, params(0.05, 0, 0, kPi));
    const auto r = run_diag(init, params(0.05, e_par, 0, kPi), 500.0, cls_support(0));
    const auto m = oscillation_metrics(r.series, 10.0);
    double pmax = 0;
    for (const auto& pt : r.series.points) pmax = std::max(pmax, pt.total_power);
    const double s = max_abs_asymmetry(r.series);
    const bool ok = m.is_bounded && s > 0.05;
    pass = pass && ok;
    d += fmt("E=%.2f: ", e_par) + (m.is_bounded ? "bounded" : "UNBOUNDED") +
         fmt(" Pmax/P0=%.2f", pmax / r.series.points.front().total_power) + fmt(" max|S|=%.3f; ", s);
  }
  return {pass, d};
}

Outcome crit8() {
  const auto p0_model = params(0.05, 0, 0.05, kPi);
  const auto init = build_cls({cls_variant_for(p0_model)}, p0_model);
  const auto r = run_diag(init, params(0.05, 0.1, 0.05, kPi), 2000.0, cls_support(0));
  const double p500 = power_at(r.series, 500.0), p2000 = power_at(r.series, 2000.0);
  const double p0 = r.series.points.front().total_power;
  double comp100 = NAN;
  for (const auto& d : r.series.points)
    if (std::abs(d.z - 100.0) < 1e-6) comp100 = d.complement_power;
  const bool pass = r.summary.status == EvolveStatus::completed && p2000 > p500 && comp100 > 1e-6 * p0;
  return {pass, fmt("P(500) = %.4g", p500) + fmt(", P(2000) = %.4g", p2000) +
                    fmt(", complement(100)/P0 = %.3e (threshold 1e-6)", comp100 / p0)};
}

Outcome crit9() {
  const auto init = build_cls({}, params(3.0, 0, 0, kPi));
  const auto r = run_diag(init, params(3.0, 0.1, 0, kPi), 200.0, {});
  return {r.summary.status == EvolveStatus::blew_up,
          std::string("status = ") + to_string(r.summary.status) + fmt(" at z = %.2f", r.summary.z_stop)};
}

Outcome crit10() {
  OscillationMetrics m[2];
  double pr[2];
  const double fields[2] = {0.05, 0.1};
  for (int i = 0; i < 2; ++i) {
    const auto p = params(0.05, fields[i], 0, kPi / 2);
    const auto r = run_diag(gaussian_initial(p, 70, 0), p, 500.0, {}, 50);
    m[i] = oscillation_metrics(r.series, 10.0);
    double pmax = 0;
    for (const auto& pt : r.series.points) pmax = std::max(pmax, pt.total_power);
    pr[i] = pmax / r.series.points.front().total_power;
  }
  const bool period_ok = m[0].period_z && m[1].period_z && *m[0].period_z > *m[1].period_z;
  const bool pass = m[0].is_bounded && m[1].is_bounded && m[0].amplitude > m[1].amplitude && period_ok;
  auto per = [](const OscillationMetrics& x) {
    return x.period_z ? fmt("%.1f", *x.period_z) : std::string("undetermined");
  };
  return {pass, std::string("bounded: ") + (m[0].is_bounded ? "yes" : "no") + "/" +
                    (m[1].is_bounded ? "yes" : "no") + fmt(", Pmax/P0 = %.3g", pr[0]) +
                    fmt("/%.3g", pr[1]) + fmt(", amplitude = %.2f", m[0].amplitude) +
                    fmt("/%.2f", m[1].amplitude) + ", period = " + per(m[0]) + "/" + per(m[1])};
}

Outcome crit11() {
  const auto rep = finite_spectrum(params(0.05, 0.05, 0, kPi / 2), 1e-6);
  std::string idx;
  for (int i : rep.complex_indices) idx += std::to_string(i) + " ";
  return {rep.eigenvalues.size() == 903 && rep.complex_count == 2,
          "eigenvalues = " + std::to_string(rep.eigenvalues.size()) +
              ", complex_count = " + std::to_string(rep.complex_count) + " (indices " + idx + ")"};
}

Outcome crit12() {
  std::mt19937_64 rng(1212);
  std::uniform_real_distribution<double> u(0, 1);
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    const double e_perp = (t % 2 == 0) ? 0.0 : 0.1 * u(rng) + 1e-3;
    const auto p = params(3 * u(rng), 0.2 * u(rng), e_perp, kTwoPi * u(rng), -10, 10);
    agree += pt_check(p).is_pt_symmetric == (e_perp == 0.0);
  }
  double worst = 0;
  for (double phi : {0.0, kPi / 4, kPi / 3, kPi / 2, kPi})
    for (double e_par : {0.0, 0.05, 0.1})
      for (int half : {10, 25}) {
        const auto rep = finite_spectrum(params(0.05, e_par, 0, phi, -half, half));
        worst = std::max(worst, conjugate_pairing_residual(rep.eigenvalues));
      }
  const auto fig7 = finite_spectrum(params(0.05, 0.05, 0, kPi / 2));
  worst = std::max(worst, conjugate_pairing_residual(fig7.eigenvalues));
  return {agree == 100 && worst < 1e-9,
          "pt_check agreement " + std::to_string(agree) + "/100" +
              fmt(", max pairing residual = %.2e (tol 1e-9)", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
    double time_limit_s;
  };
  const std::vector<Criterion> criteria = {
      {"1  cubic roots vs Bloch eigensolve", crit1, 5},
      {"2  flat band and crossover momentum", crit2, 1},
      {"3  gapless/isolated classification", crit3, 5},
      {"4  CLS null modes", crit4, 2},
      {"5  CLS stationarity", crit5, 30},
      {"6  RK4 vs matrix-exponential oracle", crit6, 10},
      {"7  bounded asymmetric CLS Bloch oscillations", crit7, 240},  // two runs, 2 min each
      {"8  amplification under transverse field", crit8, 300},
      {"9  broken-phase blow-up", crit9, 60},
      {"10 Gaussian Bloch oscillations at phi=pi/2", crit10, 180},
      {"11 finite spectrum complex count", crit11, 60},
      {"12 PT check and conjugate pairing", crit12, 30},
  };
  int failed = 0;
  for (const auto& [name, fn, limit] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit) {
      o.pass = false;
      o.detail += fmt("; runtime over the %.0f s limit", limit);
    }
    std::printf("[%s] %-46s %s  (%.1f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
