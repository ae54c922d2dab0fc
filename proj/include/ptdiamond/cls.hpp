/**
 * @file cls.hpp
 * @brief Two-site compact localized states of the flat band.
 *
 * For phi = 0 or pi the flat band sits at lambda = 0, so a compact localized
 * state is an exact null vector of H. Only the two-site families are built
 * here; any other candidate can be checked with cls_residual().
 */
#pragma once

#include <cmath>
#include <string>

#include "ptdiamond/model.hpp"

namespace ptdiamond {

enum class ClsVariant { two_site_phi0, two_site_phipi, two_site_phi0_eperp, two_site_phipi_eperp };

inline const char* to_string(ClsVariant v) {
  switch (v) {
    case ClsVariant::two_site_phi0: return "two_site_phi0";
    case ClsVariant::two_site_phipi: return "two_site_phipi";
    case ClsVariant::two_site_phi0_eperp: return "two_site_phi0_eperp";
    case ClsVariant::two_site_phipi_eperp: return "two_site_phipi_eperp";
  }
  return "?";
}

inline ClsVariant cls_variant_from_string(const std::string& s) {
  for (auto v : {ClsVariant::two_site_phi0, ClsVariant::two_site_phipi,
                 ClsVariant::two_site_phi0_eperp, ClsVariant::two_site_phipi_eperp})
    if (s == to_string(v)) return v;
  throw ValidationError("unknown CLS variant '" + s + "'");
}

struct ClsSpec {
  ClsVariant variant = ClsVariant::two_site_phipi;
  cplx a0{1.0, 0.0};
  int anchor = 0;  ///< support is cells {anchor, anchor + 1}
};

inline bool is_pi_variant(ClsVariant v) {
  return v == ClsVariant::two_site_phipi || v == ClsVariant::two_site_phipi_eperp;
}

inline bool is_eperp_variant(ClsVariant v) {
  return v == ClsVariant::two_site_phi0_eperp || v == ClsVariant::two_site_phipi_eperp;
}

/// Variant matching phi (0 or pi); E_perp picks the *_eperp form.
inline ClsVariant cls_variant_for(const ModelParams& params) {
  const ModelParams p = validated(params);
  const PhaseFactors ph = phase_factors(p.phi);
  if (ph.sin != 0.0) throw ValidationError("cls: no flat band unless phi is 0 or pi");
  const bool pi = ph.cos < 0.0;
  if (p.e_perp != 0.0)
    return pi ? ClsVariant::two_site_phipi_eperp : ClsVariant::two_site_phi0_eperp;
  return pi ? ClsVariant::two_site_phipi : ClsVariant::two_site_phi0;
}

inline LatticeState build_cls(const ClsSpec& spec, const ModelParams& params) {
  const ModelParams p = validated(params);
  if (p.e_par != 0.0)
    throw ValidationError("build_cls: e_par must be 0 (a CLS is not an eigenmode of the tilted lattice)");
  if (spec.a0 == 0.0) throw ValidationError("build_cls: a0 must be nonzero");
  if (!p.contains(spec.anchor) || !p.contains(spec.anchor + 1))
    throw ValidationError("build_cls: anchor " + std::to_string(spec.anchor) +
                          " leaves the two-cell support outside the lattice");

  const PhaseFactors ph = phase_factors(p.phi);
  const bool want_pi = is_pi_variant(spec.variant);
  if (ph.sin != 0.0 || (ph.cos < 0.0) != want_pi)
    throw ValidationError(std::string("build_cls: variant ") + to_string(spec.variant) +
                          " needs phi = " + (want_pi ? "pi" : "0"));
  if (!is_eperp_variant(spec.variant) && p.e_perp != 0.0)
    throw ValidationError(std::string("build_cls: variant ") + to_string(spec.variant) +
                          " needs e_perp = 0; use the _eperp form");

  const cplx detune(p.e_perp, p.gamma);
  const int s = spec.anchor;
  LatticeState st = LatticeState::zeros(p);
  if (want_pi) {
    st.a(s) = spec.a0;
    st.c(s) = -spec.a0;
    st.a(s + 1) = -spec.a0;
    st.c(s + 1) = spec.a0;
    st.b(s) = -detune * spec.a0;
  } else {
    st.a(s) = spec.a0;
    st.c(s) = -spec.a0;
    st.a(s + 1) = spec.a0;
    st.c(s + 1) = -spec.a0;
    st.b(s) = detune * spec.a0;
  }
  return st;
}

/// ||H psi|| / ||psi||, zero for the zero state.
inline double cls_residual(const LatticeState& state, const ModelParams& params) {
  const RealSpaceOperator op = real_space_operator(params);
  if (op.params.e_par != 0.0) throw ValidationError("cls_residual: e_par must be 0");
  check_compatible(state, op.params);
  const double norm = state.amps.norm();
  if (norm == 0.0) return 0.0;
  const Eigen::VectorXcd h = op.matrix * state.amps;
  return h.norm() / norm;
}

}  // namespace ptdiamond
