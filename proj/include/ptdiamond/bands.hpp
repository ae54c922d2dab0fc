/**
 * @file bands.hpp
 * @brief Bloch bands of the untilted lattice.
 *
 * The propagation constants at momentum k are the roots of
 *     lambda^3 - P lambda + Q = 0,
 *     P = E_perp^2 + 2 i gamma E_perp - gamma^2 + 4 (1 + cos(phi) cos(k)),
 *     Q = 4 (E_perp + i gamma) sin(phi) sin(k).
 * Roots come from Cardano's formula with a companion-matrix fallback, and
 * every sweep is cross-checked against a direct eigensolve of M(k).
 */
#pragma once

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ptdiamond/model.hpp"

namespace ptdiamond {

/// Reference gain/loss strength separating gapless from isolated flat-band spectra.
inline const double kGammaCritical = 2.0 * std::sqrt(2.0);

struct CharacteristicCoefficients {
  cplx p;
  cplx q;
};

inline CharacteristicCoefficients characteristic_coefficients(const ModelParams& params,
                                                              double k) {
  const ModelParams m = validated(params);
  if (m.e_par != 0.0)
    throw ValidationError("characteristic_coefficients: e_par must be 0");
  if (!std::isfinite(k)) throw ValidationError("characteristic_coefficients: k must be finite");
  const PhaseFactors ph = phase_factors(m.phi);
  const double g = m.gamma, e = m.e_perp;
  const cplx p = cplx(e * e - g * g, 2.0 * g * e) + 4.0 * (1.0 + ph.cos * std::cos(k));
  const cplx q = 4.0 * cplx(e, g) * ph.sin * std::sin(k);
  return {p, q};
}

enum class CubicMethod { triple_zero, factored, cardano, companion };

struct CubicRoots {
  std::array<cplx, 3> roots{};
  CubicMethod method = CubicMethod::cardano;
  bool degenerate = false;  ///< P = Q = 0, triple root at zero
  double max_residual = 0.0;
};

inline cplx cubic_value(const CharacteristicCoefficients& c, cplx x) {
  return x * x * x - c.p * x + c.q;
}

/// Residual normalized as in the acceptance bound |f(x)| / max(1, |x|^3).
inline double cubic_residual(const CharacteristicCoefficients& c, cplx x) {
  const double s = std::max(1.0, std::pow(std::abs(x), 3));
  return std::abs(cubic_value(c, x)) / s;
}

inline void sort_roots(std::array<cplx, 3>& r) {
  std::sort(r.begin(), r.end(), [](const cplx& x, const cplx& y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
}

/// Eigenvalues of the companion matrix of x^3 - P x + Q.
inline std::array<cplx, 3> companion_roots(const CharacteristicCoefficients& c) {
  Eigen::Matrix3cd comp;
  comp << 0.0, 0.0, -c.q,
          1.0, 0.0, c.p,
          0.0, 1.0, 0.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(comp, false);
  if (es.info() != Eigen::Success)
    throw NumericalError("companion_roots: eigensolver did not converge");
  std::array<cplx, 3> r{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
  sort_roots(r);
  return r;
}

inline constexpr double kCubicResidualBound = 1e-10;

inline CubicRoots solve_cubic(const CharacteristicCoefficients& c) {
  if (!std::isfinite(c.p.real()) || !std::isfinite(c.p.imag()) ||
      !std::isfinite(c.q.real()) || !std::isfinite(c.q.imag()))
    throw ValidationError("solve_cubic: coefficients must be finite");

  CubicRoots out;
  if (c.p == 0.0 && c.q == 0.0) {
    out.method = CubicMethod::triple_zero;
    out.degenerate = true;
    return out;
  }
  if (c.q == 0.0) {
    const cplx s = std::sqrt(c.p);
    out.roots = {cplx(0.0), -s, s};
    out.method = CubicMethod::factored;
  } else {
    // x = -(C w^j + D0 / (C w^j)) / 3 with D0 = 3P, D1 = 27Q.
    const cplx d0 = 3.0 * c.p;
    const cplx d1 = 27.0 * c.q;
    const cplx disc = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
    const cplx plus = d1 + disc, minus = d1 - disc;
    const cplx big = std::abs(plus) >= std::abs(minus) ? plus : minus;
    const cplx cc = std::pow(0.5 * big, 1.0 / 3.0);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    cplx wj(1.0);
    for (auto& r : out.roots) {
      const cplx cw = cc * wj;
      r = -(cw + d0 / cw) / 3.0;
      wj *= w;
    }
    out.method = CubicMethod::cardano;
  }

  auto worst = [&c](const std::array<cplx, 3>& r) {
    double m = 0.0;
    for (const auto& x : r) m = std::max(m, cubic_residual(c, x));
    return m;
  };
  out.max_residual = worst(out.roots);
  if (!(out.max_residual < kCubicResidualBound)) {
    out.roots = companion_roots(c);
    out.method = CubicMethod::companion;
    out.max_residual = worst(out.roots);
  }
  sort_roots(out.roots);
  return out;
}

/// Smallest max-distance over the six pairings of two root triples.
inline double triple_distance(const std::array<cplx, 3>& x, const std::array<cplx, 3>& y) {
  std::array<int, 3> perm{0, 1, 2};
  double best = std::numeric_limits<double>::infinity();
  do {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(x[i] - y[perm[i]]));
    best = std::min(best, d);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::array<cplx, 3> bloch_eigenvalues(const ModelParams& p, double k) {
  const BlochOperator m = bloch_operator(p, k);
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m.entries, false);
  if (es.info() != Eigen::Success)
    throw NumericalError("bloch_eigenvalues: eigensolver did not converge");
  std::array<cplx, 3> r{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
  sort_roots(r);
  return r;
}

struct BandPoint {
  double k = 0.0;
  std::array<cplx, 3> lambdas{};  ///< sorted by (Re, Im)
  bool degenerate = false;
  double eig_deviation = 0.0;     ///< distance to the eigensolve of M(k)
  double root_separation = 0.0;   ///< min |lambda_i - lambda_j|
};

struct BandSweep {
  ModelParams params;
  std::vector<double> grid;
  std::vector<BandPoint> points;
  /// tracking[i][b] is the index into points[i].lambdas holding band b.
  std::vector<std::array<int, 3>> tracking;
  double max_eig_deviation = 0.0;
  int near_exceptional_points = 0;

  std::size_t size() const { return grid.size(); }
  cplx band(int b, std::size_t i) const { return points[i].lambdas[tracking[i][b]]; }
};

inline constexpr double kBandCrossCheckTolerance = 1e-9;
/// Below this root separation M(k) is close to defective and its
/// eigensolve is not an accurate reference.
inline constexpr double kNearExceptionalSeparation = 1e-4;

inline std::vector<double> uniform_k_grid(int n_k) {
  std::vector<double> g(static_cast<std::size_t>(n_k));
  for (int i = 0; i < n_k; ++i) g[i] = -kPi + kTwoPi * i / (n_k - 1);
  g.front() = -kPi;
  g.back() = kPi;
  return g;
}

namespace detail {

inline std::array<int, 3> best_assignment(const std::array<cplx, 3>& reference,
                                          const std::array<cplx, 3>& roots) {
  std::array<int, 3> perm{0, 1, 2}, best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int b = 0; b < 3; ++b) cost += std::abs(roots[perm[b]] - reference[b]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double min_root_separation(const std::array<cplx, 3>& r) {
  return std::min({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]), std::abs(r[1] - r[2])});
}

}  // namespace detail

inline BandSweep band_sweep(const ModelParams& params, int n_k) {
  const ModelParams p = validated(params);
  if (p.e_par != 0.0) throw ValidationError("band_sweep: e_par must be 0");
  if (n_k < 16) throw ValidationError("band_sweep: n_k must be >= 16");

  BandSweep sw;
  sw.params = p;
  sw.grid = uniform_k_grid(n_k);
  sw.points.resize(sw.grid.size());

  for (std::size_t i = 0; i < sw.grid.size(); ++i) {
    const double k = sw.grid[i];
    const CubicRoots roots = solve_cubic(characteristic_coefficients(p, k));
    BandPoint& pt = sw.points[i];
    pt.k = k;
    pt.lambdas = roots.roots;
    pt.degenerate = roots.degenerate;
    pt.root_separation = detail::min_root_separation(roots.roots);
    pt.eig_deviation = triple_distance(roots.roots, bloch_eigenvalues(p, k));
    if (pt.root_separation < kNearExceptionalSeparation) {
      ++sw.near_exceptional_points;
      continue;
    }
    sw.max_eig_deviation = std::max(sw.max_eig_deviation, pt.eig_deviation);
    if (!(pt.eig_deviation < kBandCrossCheckTolerance))
      throw NumericalError("band_sweep: cubic roots and Bloch eigenvalues disagree by " +
                           std::to_string(pt.eig_deviation) + " at k=" + std::to_string(k));
  }

  sw.tracking.resize(sw.grid.size());
  sw.tracking[0] = {0, 1, 2};
  for (std::size_t i = 1; i < sw.grid.size(); ++i) {
    std::array<cplx, 3> prev{};
    for (int b = 0; b < 3; ++b) prev[b] = sw.band(b, i - 1);
    sw.tracking[i] = detail::best_assignment(prev, sw.points[i].lambdas);
  }
  return sw;
}

/// A located point where two different bands meet (or come closest).
struct TouchingPoint {
  int band_n = 0;
  double k_n = 0.0;
  int band_m = 0;
  double k_m = 0.0;
  double separation = 0.0;
};

struct GapReport {
  bool has_flat_band = false;
  int flat_band = -1;            ///< tracked band index, -1 if none
  bool is_gapless = false;
  double min_separation = 0.0;
  double gamma_c = kGammaCritical;
  std::vector<TouchingPoint> touching_points;
};

inline constexpr double kDefaultSeparationTolerance = 1e-6;
inline constexpr double kFlatBandTolerance = 1e-9;

namespace detail {

/// Tracked band value at an off-grid momentum inside the sweep's range.
inline cplx band_value_at(const BandSweep& sw, int b, double k) {
  const auto& g = sw.grid;
  auto it = std::upper_bound(g.begin(), g.end(), k);
  std::size_t hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
      it - g.begin(), 1, static_cast<std::ptrdiff_t>(g.size()) - 1));
  const std::size_t lo = hi - 1;
  const double t = (k - g[lo]) / (g[hi] - g[lo]);
  std::array<cplx, 3> ref{};
  for (int j = 0; j < 3; ++j) ref[j] = (1.0 - t) * sw.band(j, lo) + t * sw.band(j, hi);
  const auto roots = solve_cubic(characteristic_coefficients(sw.params, k)).roots;
  return roots[best_assignment(ref, roots)[b]];
}

inline std::pair<double, double> bracket(const BandSweep& sw, std::size_t i) {
  const std::size_t lo = i == 0 ? 0 : i - 1;
  const std::size_t hi = std::min(i + 1, sw.size() - 1);
  return {sw.grid[lo], sw.grid[hi]};
}

/// Golden-section polish of a Brent minimum. Brent stops at sqrt(eps) in k, which is
/// too coarse near exceptional points where the separation grows like sqrt|k - k0|.
template <class F>
std::pair<double, double> polish_minimum(F f, double x, double lo, double hi) {
  const double w = 1e-6 * (1.0 + std::abs(x));
  double a = std::max(lo, x - w), b = std::min(hi, x + w);
  constexpr double r = 0.6180339887498949;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && b - a > 4 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = f(d);
    }
  }
  const double xm = fc < fd ? c : d;
  const double fm = std::min(fc, fd);
  const double fx = f(x);
  return fx <= fm ? std::make_pair(x, fx) : std::make_pair(xm, fm);
}

/// Alternating 1-D Brent searches over (k, k') around a grid minimum.
inline TouchingPoint refine_pair(const BandSweep& sw, int n, std::size_t i, int m,
                                 std::size_t j, double grid_sep) {
  constexpr int kBits = std::numeric_limits<double>::digits;
  const auto [kn_lo, kn_hi] = bracket(sw, i);
  const auto [km_lo, km_hi] = bracket(sw, j);
  double kn = sw.grid[i], km = sw.grid[j];
  double best = grid_sep;
  for (int iter = 0; iter < 40; ++iter) {
    const cplx vm = band_value_at(sw, m, km);
    auto fn = [&](double k) { return std::abs(band_value_at(sw, n, k) - vm); };
    const auto rn = polish_minimum(fn, boost::math::tools::brent_find_minima(fn, kn_lo, kn_hi, kBits).first,
                                   kn_lo, kn_hi);
    if (rn.second < best) { kn = rn.first; best = rn.second; }

    const cplx vn = band_value_at(sw, n, kn);
    auto fm = [&](double k) { return std::abs(vn - band_value_at(sw, m, k)); };
    const auto rm = polish_minimum(fm, boost::math::tools::brent_find_minima(fm, km_lo, km_hi, kBits).first,
                                   km_lo, km_hi);
    const double before = best;
    if (rm.second < best) { km = rm.first; best = rm.second; }
    if (!(best < before) && iter > 0) break;
  }
  return {n, kn, m, km, best};
}

}  // namespace detail

inline GapReport classify_gaps(const BandSweep& sw,
                               double separation_tolerance = kDefaultSeparationTolerance) {
  if (sw.size() < 2 || sw.tracking.size() != sw.size())
    throw ValidationError("classify_gaps: sweep is empty or untracked");
  const std::size_t nk = sw.size();
  GapReport rep;

  for (int b = 0; b < 3 && !rep.has_flat_band; ++b) {
    cplx mean(0.0);
    for (std::size_t i = 0; i < nk; ++i) mean += sw.band(b, i);
    mean /= static_cast<double>(nk);
    double dev = 0.0;
    for (std::size_t i = 0; i < nk; ++i) dev = std::max(dev, std::abs(sw.band(b, i) - mean));
    if (dev < kFlatBandTolerance) {
      rep.has_flat_band = true;
      rep.flat_band = b;
    }
  }

  rep.min_separation = std::numeric_limits<double>::infinity();
  for (int n = 0; n < 3; ++n) {
    for (int m = n + 1; m < 3; ++m) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < nk; ++i) {
        const cplx vn = sw.band(n, i);
        for (std::size_t j = 0; j < nk; ++j) {
          const double d = std::abs(vn - sw.band(m, j));
          if (d < best) { best = d; bi = i; bj = j; }
        }
      }
      const TouchingPoint tp = detail::refine_pair(sw, n, bi, m, bj, best);
      rep.min_separation = std::min(rep.min_separation, tp.separation);
      if (tp.separation < separation_tolerance) rep.touching_points.push_back(tp);
    }
  }
  rep.is_gapless = rep.min_separation < separation_tolerance;
  return rep;
}

}  // namespace ptdiamond
