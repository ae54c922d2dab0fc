/**
 * @file evolve.hpp
 * @brief Propagation of i dpsi/dz = H psi along z.
 *
 * Fixed-step classical RK4 on the sparse operator. Observation is streamed
 * through a callback so long runs keep memory proportional to one state;
 * evolve() is the convenience form that collects every sample.
 */
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ptdiamond/expm.hpp"
#include "ptdiamond/model.hpp"

namespace ptdiamond {

struct EvolveConfig {
  double z_end = 100.0;
  double dz = 0.01;
  int sample_every = 100;
  double overflow_cap = 1e12;  ///< +inf disables blow-up detection
};

inline void validate(const EvolveConfig& c) {
  if (!(c.z_end > 0.0) || !std::isfinite(c.z_end))
    throw ValidationError("evolve.z_end: must be > 0");
  if (!(c.dz > 0.0) || !std::isfinite(c.dz)) throw ValidationError("evolve.dz: must be > 0");
  if (c.sample_every < 1) throw ValidationError("evolve.sample_every: must be >= 1");
  if (!(c.overflow_cap > 1.0)) throw ValidationError("evolve.overflow_cap: must be > 1");
}

enum class EvolveStatus { completed, blew_up };

inline const char* to_string(EvolveStatus s) {
  return s == EvolveStatus::completed ? "completed" : "blew_up";
}

struct IntegratorMeta {
  std::string method = "rk4";
  double step = 0.0;          ///< actual step (z_end / steps, <= dz)
  long long steps = 0;        ///< steps taken
  double spectral_radius = 0.0;  ///< power-iteration estimate of rho(H)
  /// Leading RK4 local error factor (step * rho)^5 / 120 for the fastest mode.
  double local_error_estimate = 0.0;
};

/// RK4 on purely imaginary spectra is stable for step * rho below ~2.83.
inline constexpr double kRk4StabilityLimit = 2.6;

struct EvolveSummary {
  EvolveStatus status = EvolveStatus::completed;
  double z_stop = 0.0;
  IntegratorMeta meta;
  std::size_t samples = 0;
};

struct Trajectory {
  std::vector<LatticeState> samples;
  EvolveStatus status = EvolveStatus::completed;
  double z_stop = 0.0;
  IntegratorMeta meta;
};

/// Dominant |eigenvalue| of H by power iteration from a fixed start vector.
inline double estimate_spectral_radius(const RealSpaceOperator& op, int iterations = 60) {
  const auto n = op.dim();
  Eigen::VectorXcd v(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(1.0, (i % 3) * 0.5 - 0.5);
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    w.noalias() = op.matrix * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    est = nw;
    v = w / nw;
  }
  return est;
}

using SampleObserver = std::function<void(const LatticeState&)>;

inline EvolveSummary evolve_streaming(const LatticeState& initial, const ModelParams& params,
                                      const EvolveConfig& config, const SampleObserver& observe) {
  validate(config);
  const RealSpaceOperator op = real_space_operator(params);
  check_compatible(initial, op.params);
  if (!initial.is_finite()) throw ValidationError("evolve: initial state is not finite");

  EvolveSummary out;
  out.meta.spectral_radius = estimate_spectral_radius(op);
  const long long steps =
      static_cast<long long>(std::ceil(config.z_end / config.dz - 1e-9));
  const double h = config.z_end / static_cast<double>(steps);
  out.meta.step = h;
  out.meta.local_error_estimate = std::pow(h * out.meta.spectral_radius, 5) / 120.0;
  if (h * out.meta.spectral_radius >= kRk4StabilityLimit)
    throw ValidationError("evolve.dz: step " + std::to_string(h) +
                          " exceeds RK4 stability bound 2.6/rho with rho ~ " +
                          std::to_string(out.meta.spectral_radius));

  const cplx mih(0.0, -h);  // -i h
  Eigen::VectorXcd psi = initial.amps;
  Eigen::VectorXcd k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()),
      tmp(psi.size());

  auto emit = [&](double z) {
    observe(LatticeState{z, initial.n_min, psi});
    ++out.samples;
  };

  emit(0.0);
  double z = 0.0;
  for (long long s = 1; s <= steps; ++s) {
    // k_i hold h * dpsi/dz evaluated at the stage points.
    k1.noalias() = mih * (op.matrix * psi);
    tmp = psi + 0.5 * k1;
    k2.noalias() = mih * (op.matrix * tmp);
    tmp = psi + 0.5 * k2;
    k3.noalias() = mih * (op.matrix * tmp);
    tmp = psi + k3;
    k4.noalias() = mih * (op.matrix * tmp);
    psi += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    ++out.meta.steps;

    const double z_next = s == steps ? config.z_end : h * static_cast<double>(s);
    if (!psi.allFinite())
      throw IntegrationFailure("evolve: state became non-finite after z=" + std::to_string(z), z);
    z = z_next;

    if (std::isfinite(config.overflow_cap) && psi.cwiseAbs().maxCoeff() >= config.overflow_cap) {
      emit(z);
      out.status = EvolveStatus::blew_up;
      out.z_stop = z;
      return out;
    }
    if (s % config.sample_every == 0 || s == steps) emit(z);
  }
  out.z_stop = z;
  return out;
}

inline Trajectory evolve(const LatticeState& initial, const ModelParams& params,
                         const EvolveConfig& config) {
  Trajectory tr;
  const EvolveSummary sum = evolve_streaming(
      initial, params, config, [&tr](const LatticeState& s) { tr.samples.push_back(s); });
  tr.status = sum.status;
  tr.z_stop = sum.z_stop;
  tr.meta = sum.meta;
  return tr;
}

inline constexpr int kOracleMaxCells = 40;

/// psi(z_end) = exp(-i H z_end) psi(0) by dense matrix exponential.
inline LatticeState evolve_oracle(const LatticeState& initial, const ModelParams& params,
                                  double z_end) {
  const ModelParams p = validated(params);
  if (p.cells() > kOracleMaxCells)
    throw ValidationError("evolve_oracle: at most " + std::to_string(kOracleMaxCells) +
                          " cells");
  check_compatible(initial, p);
  const Eigen::MatrixXcd h = real_space_operator(p).dense();
  const Eigen::MatrixXcd u = matrix_exponential((cplx(0.0, -z_end) * h).eval());
  return {initial.z + z_end, initial.n_min, u * initial.amps};
}

/// A_n = -C_n = exp(-(n - center)^2 / (2 sigma^2)), B_n = 0, peak 1.
inline LatticeState gaussian_initial(const ModelParams& params, double sigma, double center) {
  const ModelParams p = validated(params);
  if (!(sigma > 0.0)) throw ValidationError("gaussian_initial: sigma must be > 0");
  LatticeState st = LatticeState::zeros(p);
  for (int n = p.n_min; n <= p.n_max; ++n) {
    const double x = n - center;
    const double v = std::exp(-x * x / (2.0 * sigma * sigma));
    st.a(n) = v;
    st.c(n) = -v;
  }
  return st;
}

}  // namespace ptdiamond
