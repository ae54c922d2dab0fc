/**
 * @file model.hpp
 * @brief Diamond-chain waveguide lattice with gain/loss, Peierls phase and
 *        synthetic electric fields.
 *
 * Each unit cell n carries three amplitudes (a_n, b_n, c_n). The coupled-mode
 * equations are written as  i dpsi/dz = H psi  with
 *
 *   (H psi)_{a_n} = (E_par n + E_perp + i gamma) a_n - e^{-i phi} b_n - b_{n-1}
 *   (H psi)_{b_n} = E_par (n + 1/2) b_n - e^{i phi} a_n - e^{-i phi} c_n
 *                   - c_{n+1} - a_{n+1}
 *   (H psi)_{c_n} = (E_par n - E_perp - i gamma) c_n - e^{i phi} b_n - b_{n-1}
 *
 * Plane-wave modes go as exp(i lambda z + i k n), so every propagation
 * constant lambda reported by this library is an eigenvalue of -H. A mode
 * with Im(lambda) < 0 grows along z.
 *
 * Couplings that reference cells outside [n_min, n_max] are dropped (open
 * ends). The flattened state is interleaved (a, b, c) per cell, ascending n.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ptdiamond/errors.hpp"

namespace ptdiamond {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Convention tag written next to every reported spectrum.
inline constexpr const char* kLambdaConvention =
    "eigenvalues of -H; modes evolve as exp(i*lambda*z); Im<0 amplifies";

enum class Boundary { open };

enum class Leg : int { a = 0, b = 1, c = 2 };

struct ModelParams {
  double gamma = 0.0;   ///< gain on leg a, loss on leg c
  double e_par = 0.0;   ///< longitudinal field (Wannier-Stark tilt)
  double e_perp = 0.0;  ///< transverse field (a/c detuning)
  double phi = 0.0;     ///< Peierls phase, radians
  int n_min = -150;
  int n_max = 150;
  Boundary boundary = Boundary::open;

  int cells() const { return n_max - n_min + 1; }
  Eigen::Index dim() const { return 3 * static_cast<Eigen::Index>(cells()); }
  bool contains(int n) const { return n >= n_min && n <= n_max; }
  Eigen::Index index(int n, Leg leg) const {
    return 3 * static_cast<Eigen::Index>(n - n_min) + static_cast<int>(leg);
  }
};

inline double normalize_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Checks the invariants and returns a copy with phi folded into [0, 2pi).
inline ModelParams validated(ModelParams p) {
  if (!std::isfinite(p.gamma) || !std::isfinite(p.e_par) ||
      !std::isfinite(p.e_perp) || !std::isfinite(p.phi))
    throw ValidationError("model: parameters must be finite");
  if (p.gamma < 0.0) throw ValidationError("model.gamma: must be >= 0");
  if (p.n_min > p.n_max)
    throw ValidationError("model.n_min/n_max: need n_min <= n_max");
  p.phi = normalize_phase(p.phi);
  return p;
}

struct PhaseFactors {
  double cos = 1.0;
  double sin = 0.0;
  cplx plus() const { return {cos, sin}; }    ///< e^{+i phi}
  cplx minus() const { return {cos, -sin}; }  ///< e^{-i phi}
};

/// cos/sin of phi, exact at multiples of pi/2 so that phi = pi really
/// produces Q = 0 and a flat band at exactly zero.
inline PhaseFactors phase_factors(double phi) {
  const double quarter = phi / (kPi / 2.0);
  const double r = std::round(quarter);
  if (std::abs(quarter - r) < 1e-13) {
    switch (((static_cast<long long>(r) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return {std::cos(phi), std::sin(phi)};
}

/// Amplitudes of all cells at one propagation distance.
struct LatticeState {
  double z = 0.0;
  int n_min = 0;
  Eigen::VectorXcd amps;

  static LatticeState zeros(const ModelParams& p, double z = 0.0) {
    return {z, p.n_min, Eigen::VectorXcd::Zero(p.dim())};
  }

  int cells() const { return static_cast<int>(amps.size() / 3); }
  int n_max() const { return n_min + cells() - 1; }

  cplx& at(int n, Leg leg) { return amps[slot(n, leg)]; }
  const cplx& at(int n, Leg leg) const { return amps[slot(n, leg)]; }
  cplx& a(int n) { return at(n, Leg::a); }
  cplx& b(int n) { return at(n, Leg::b); }
  cplx& c(int n) { return at(n, Leg::c); }
  const cplx& a(int n) const { return at(n, Leg::a); }
  const cplx& b(int n) const { return at(n, Leg::b); }
  const cplx& c(int n) const { return at(n, Leg::c); }

  bool is_finite() const { return amps.allFinite(); }
  double max_abs() const {
    return amps.size() == 0 ? 0.0 : amps.cwiseAbs().maxCoeff();
  }

private:
  Eigen::Index slot(int n, Leg leg) const {
    if (n < n_min || n > n_max())
      throw ValidationError("state: cell " + std::to_string(n) + " out of range");
    return 3 * static_cast<Eigen::Index>(n - n_min) + static_cast<int>(leg);
  }
};

inline void check_compatible(const LatticeState& s, const ModelParams& p) {
  if (s.amps.size() != p.dim() || s.n_min != p.n_min)
    throw ValidationError("state: layout does not match model cell range [" +
                          std::to_string(p.n_min) + ", " +
                          std::to_string(p.n_max) + "]");
}

/// 3x3 matrix M(k) whose eigenvalues are the propagation constants at k.
struct BlochOperator {
  Eigen::Matrix3cd entries;
};

inline BlochOperator bloch_operator(const ModelParams& params, double k) {
  const ModelParams p = validated(params);
  if (p.e_par != 0.0)
    throw ValidationError("bloch_operator: e_par must be 0 (no Bloch form under tilt)");
  if (!std::isfinite(k)) throw ValidationError("bloch_operator: k must be finite");

  const PhaseFactors ph = phase_factors(p.phi);
  const cplx eik = std::polar(1.0, k);
  const cplx d(p.e_perp, p.gamma);

  BlochOperator m;
  m.entries << -d, ph.minus() + std::conj(eik), 0.0,
               ph.plus() + eik, 0.0, ph.minus() + eik,
               0.0, ph.plus() + std::conj(eik), d;
  return m;
}

/// Finite-lattice H with the sign convention i dpsi/dz = H psi.
struct RealSpaceOperator {
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  ModelParams params;
  Sparse matrix;

  Eigen::Index dim() const { return matrix.rows(); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
};

inline RealSpaceOperator real_space_operator(const ModelParams& params) {
  const ModelParams p = validated(params);
  const PhaseFactors ph = phase_factors(p.phi);
  const cplx igam(0.0, p.gamma);

  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(p.cells()) * 11);
  for (int n = p.n_min; n <= p.n_max; ++n) {
    const auto a = p.index(n, Leg::a);
    const auto b = p.index(n, Leg::b);
    const auto c = p.index(n, Leg::c);
    t.emplace_back(a, a, p.e_par * n + p.e_perp + igam);
    t.emplace_back(b, b, p.e_par * (n + 0.5));
    t.emplace_back(c, c, p.e_par * n - p.e_perp - igam);

    t.emplace_back(a, b, -ph.minus());
    t.emplace_back(b, a, -ph.plus());
    t.emplace_back(c, b, -ph.plus());
    t.emplace_back(b, c, -ph.minus());

    if (p.contains(n - 1)) {
      const auto bl = p.index(n - 1, Leg::b);
      t.emplace_back(a, bl, -1.0);
      t.emplace_back(bl, a, -1.0);
      t.emplace_back(c, bl, -1.0);
      t.emplace_back(bl, c, -1.0);
    }
  }

  RealSpaceOperator op{p, RealSpaceOperator::Sparse(p.dim(), p.dim())};
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.matrix.makeCompressed();
  return op;
}

/// Signed permutation a_n -> -c_n, b_n -> -b_n, c_n -> -a_n.
inline RealSpaceOperator::Sparse parity_matrix(const ModelParams& p) {
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(p.dim()));
  for (int n = p.n_min; n <= p.n_max; ++n) {
    t.emplace_back(p.index(n, Leg::a), p.index(n, Leg::c), -1.0);
    t.emplace_back(p.index(n, Leg::b), p.index(n, Leg::b), -1.0);
    t.emplace_back(p.index(n, Leg::c), p.index(n, Leg::a), -1.0);
  }
  RealSpaceOperator::Sparse P(p.dim(), p.dim());
  P.setFromTriplets(t.begin(), t.end());
  return P;
}

/// Applies the parity map followed by complex conjugation to a state.
inline LatticeState pt_transform(const LatticeState& s) {
  LatticeState out = s;
  for (int n = s.n_min; n <= s.n_max(); ++n) {
    out.a(n) = -std::conj(s.c(n));
    out.b(n) = -std::conj(s.b(n));
    out.c(n) = -std::conj(s.a(n));
  }
  return out;
}

inline double max_abs_coeff(const RealSpaceOperator::Sparse& m) {
  double r = 0.0;
  for (int i = 0; i < m.outerSize(); ++i)
    for (RealSpaceOperator::Sparse::InnerIterator it(m, i); it; ++it)
      r = std::max(r, std::abs(it.value()));
  return r;
}

struct PtCheck {
  bool is_pt_symmetric = false;
  double residual = 0.0;  ///< max |P H* P^-1 - H|
};

inline PtCheck pt_check(const ModelParams& params) {
  const RealSpaceOperator op = real_space_operator(params);
  const RealSpaceOperator::Sparse P = parity_matrix(op.params);
  // P is its own inverse.
  const RealSpaceOperator::Sparse diff =
      RealSpaceOperator::Sparse(P * op.matrix.conjugate() * P) - op.matrix;
  const double res = max_abs_coeff(diff);
  return {res < 1e-12, res};
}

/// max |H - H^dagger|; zero exactly when gamma = 0.
inline double hermiticity_residual(const RealSpaceOperator& op) {
  const RealSpaceOperator::Sparse diff =
      RealSpaceOperator::Sparse(op.matrix.adjoint()) - op.matrix;
  return max_abs_coeff(diff);
}

}  // namespace ptdiamond
