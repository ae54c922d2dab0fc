/**
 * @file diagnostics.hpp
 * @brief Observables derived from states, trajectories and finite spectra.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptdiamond/evolve.hpp"
#include "ptdiamond/model.hpp"

#ifndef lapack_complex_double
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

namespace ptdiamond {

struct IntensityProfile {
  double z = 0.0;
  int n_min = 0;
  std::vector<double> rho;  ///< |a_n|^2 + |b_n|^2 + |c_n|^2
};

inline IntensityProfile intensity(const LatticeState& s) {
  if (!s.is_finite()) throw ValidationError("intensity: state is not finite");
  IntensityProfile p{s.z, s.n_min, std::vector<double>(static_cast<std::size_t>(s.cells()))};
  for (int i = 0; i < s.cells(); ++i)
    p.rho[i] = std::norm(s.amps[3 * i]) + std::norm(s.amps[3 * i + 1]) +
               std::norm(s.amps[3 * i + 2]);
  return p;
}

/// Individual amplitudes (cell, leg) whose power is reported separately.
using SiteSet = std::vector<std::pair<int, Leg>>;

/// A_s, B_s, C_s, A_{s+1}, C_{s+1}: the sites a two-site CLS occupies.
inline SiteSet cls_support(int anchor) {
  return {{anchor, Leg::a}, {anchor, Leg::b}, {anchor, Leg::c},
          {anchor + 1, Leg::a}, {anchor + 1, Leg::c}};
}

struct DiagnosticsPoint {
  double z = 0.0;
  double total_power = 0.0;
  double center_of_mass = 0.0;
  double asymmetry = 0.0;  ///< (sum_{n>0} rho - sum_{n<0} rho) / P
  double width = 0.0;
  double excited_power = 0.0;
  double complement_power = 0.0;
};

struct DiagnosticsSeries {
  std::vector<DiagnosticsPoint> points;
};

inline DiagnosticsPoint diagnose(const LatticeState& s, const SiteSet& excited) {
  const IntensityProfile prof = intensity(s);
  DiagnosticsPoint d;
  d.z = s.z;
  double first = 0.0, second = 0.0, right = 0.0, left = 0.0;
  for (int i = 0; i < s.cells(); ++i) {
    const int n = s.n_min + i;
    const double r = prof.rho[i];
    d.total_power += r;
    first += n * r;
    second += static_cast<double>(n) * n * r;
    if (n > 0) right += r;
    if (n < 0) left += r;
  }
  std::vector<char> mask(static_cast<std::size_t>(s.amps.size()), 0);
  for (const auto& [n, leg] : excited) {
    if (n < s.n_min || n > s.n_max()) continue;
    mask[3 * static_cast<std::size_t>(n - s.n_min) + static_cast<int>(leg)] = 1;
  }
  for (Eigen::Index i = 0; i < s.amps.size(); ++i)
    (mask[i] ? d.excited_power : d.complement_power) += std::norm(s.amps[i]);

  if (d.total_power > 0.0) {
    d.center_of_mass = first / d.total_power;
    d.asymmetry = (right - left) / d.total_power;
    d.width = std::sqrt(std::max(0.0, second / d.total_power -
                                          d.center_of_mass * d.center_of_mass));
  }
  return d;
}

inline DiagnosticsSeries series(const Trajectory& tr, const SiteSet& excited = {}) {
  if (tr.samples.empty()) throw ValidationError("series: empty trajectory");
  DiagnosticsSeries out;
  out.points.reserve(tr.samples.size());
  for (const auto& s : tr.samples) out.points.push_back(diagnose(s, excited));
  return out;
}

struct OscillationMetrics {
  std::optional<double> period_z;  ///< empty when fewer than 3 peaks
  double amplitude = 0.0;          ///< (max - min) / 2 of the center of mass
  bool is_bounded = false;
  std::vector<double> peak_z;
};

inline constexpr double kDefaultBoundFactor = 10.0;

namespace detail {

/// Vertex of the parabola through three samples.
inline double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / d;
  if (a >= 0.0) return x1;
  return std::clamp(-b / (2.0 * a), x0, x2);
}

}  // namespace detail

/// Peaks of the center of mass: one per excursion above the midline
/// (max + min) / 2, excluding excursions cut by the window edges.
inline OscillationMetrics oscillation_metrics(const DiagnosticsSeries& s,
                                              double bound_factor = kDefaultBoundFactor) {
  if (s.points.empty()) throw ValidationError("oscillation_metrics: empty series");
  if (!(bound_factor >= 1.0)) throw ValidationError("oscillation_metrics: bound_factor must be >= 1");
  OscillationMetrics m;
  const auto& pts = s.points;

  const double p0 = pts.front().total_power;
  m.is_bounded = std::all_of(pts.begin(), pts.end(), [&](const DiagnosticsPoint& d) {
    return std::isfinite(d.total_power) && d.total_power >= p0 / bound_factor &&
           d.total_power <= p0 * bound_factor;
  });

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& d : pts) {
    lo = std::min(lo, d.center_of_mass);
    hi = std::max(hi, d.center_of_mass);
  }
  m.amplitude = 0.5 * (hi - lo);
  if (!(hi - lo > 1e-12 * (1.0 + std::abs(hi)))) return m;

  const double mid = 0.5 * (hi + lo);
  const std::size_t n = pts.size();
  std::size_t i = 0;
  while (i < n) {
    if (pts[i].center_of_mass <= mid) { ++i; continue; }
    std::size_t j = i, arg = i;
    while (j < n && pts[j].center_of_mass > mid) {
      if (pts[j].center_of_mass > pts[arg].center_of_mass) arg = j;
      ++j;
    }
    if (i > 0 && j < n && arg > 0 && arg + 1 < n) {
      m.peak_z.push_back(detail::parabola_vertex(
          pts[arg - 1].z, pts[arg - 1].center_of_mass, pts[arg].z, pts[arg].center_of_mass,
          pts[arg + 1].z, pts[arg + 1].center_of_mass));
    }
    i = j;
  }
  if (m.peak_z.size() >= 3)
    m.period_z = (m.peak_z.back() - m.peak_z.front()) / static_cast<double>(m.peak_z.size() - 1);
  return m;
}

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  ///< of -H, ascending Re (then Im)
  int complex_count = 0;
  std::vector<int> complex_indices;
  double im_tolerance = 0.0;
  std::string convention = kLambdaConvention;
};

inline constexpr int kSpectrumMaxCells = 2000;
inline constexpr double kDefaultImTolerance = 1e-6;

inline std::string describe(const ModelParams& p) {
  return "gamma=" + std::to_string(p.gamma) + " e_par=" + std::to_string(p.e_par) +
         " e_perp=" + std::to_string(p.e_perp) + " phi=" + std::to_string(p.phi) + " n=[" +
         std::to_string(p.n_min) + "," + std::to_string(p.n_max) + "]";
}

inline SpectrumReport finite_spectrum(const ModelParams& params,
                                      double im_tolerance = kDefaultImTolerance) {
  const ModelParams p = validated(params);
  if (p.cells() > kSpectrumMaxCells)
    throw ValidationError("finite_spectrum: at most " + std::to_string(kSpectrumMaxCells) +
                          " cells for the dense eigensolve");
  // Column-major, as LAPACK expects.
  Eigen::MatrixXcd minus_h = -real_space_operator(p).dense();
  const lapack_int n = static_cast<lapack_int>(minus_h.rows());
  std::vector<cplx> ev(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, minus_h.data(), n, ev.data(),
                                        nullptr, 1, nullptr, 1);
  if (info != 0)
    throw NumericalError("finite_spectrum: zgeev failed (info " + std::to_string(info) + ") for " +
                         describe(p));

  SpectrumReport rep;
  rep.im_tolerance = im_tolerance;
  rep.eigenvalues = std::move(ev);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const cplx& x, const cplx& y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  for (int i = 0; i < static_cast<int>(rep.eigenvalues.size()); ++i) {
    if (std::abs(rep.eigenvalues[i].imag()) > im_tolerance) {
      ++rep.complex_count;
      rep.complex_indices.push_back(i);
    }
  }
  return rep;
}

/// max over lambda of the distance from conj(lambda) to the nearest eigenvalue.
inline double conjugate_pairing_residual(const std::vector<cplx>& eig) {
  double worst = 0.0;
  for (const auto& l : eig) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : eig) best = std::min(best, std::abs(std::conj(l) - m));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Asymptotic growth rate of the total power, 2 max(-Im lambda).
inline double power_growth_rate(const SpectrumReport& rep) {
  double g = -std::numeric_limits<double>::infinity();
  for (const auto& l : rep.eigenvalues) g = std::max(g, -l.imag());
  return 2.0 * g;
}

}  // namespace ptdiamond
