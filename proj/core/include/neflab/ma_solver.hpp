#pragma once

#include "neflab/solver.hpp"

namespace neflab {

/// Smoothed positive part: tau_k(x) = (x + sqrt(x^2 + k^{-2})) / 2.
/// Positive, monotone in x, decreases to x * chi_{R+}(x) as k -> infinity.
inline double tau_smooth(double x, int k_smooth) {
  double inv = 1.0 / static_cast<double>(k_smooth);
  return 0.5 * (x + std::sqrt(x * x + inv * inv));
}

/// Monge-Ampere family: (hat omega_t + i ddbar phi)^n = c_t e^{F_hat} omega^n,
/// sup phi = 0.
SolveResult solve_ma(const SpectralTransform& st, const ProblemSpec& spec, double t,
                     const SolveOptions& opt = {});

/// Berman approximation: (hat omega_t + i ddbar u)^n = e^{beta u} omega^n.
/// The additive constant is fixed by the equation; no sup-normalization.
/// warm/warm_beta optionally seed the beta continuation from a previous solve.
SolveResult solve_beta_ma(const SpectralTransform& st, const ProblemSpec& spec,
                          double t, double beta, const SolveOptions& opt = {},
                          const PeriodicField* warm = nullptr, double warm_beta = 0.0);

struct AuxiliaryResult {
  SolveResult solve;
  double A_skb = 0.0;  // int tau_k(-phi + u_beta - s) e^{F_hat} omega^n
};

/// Auxiliary equation with sublevel-energy right side:
/// (hat omega_t + i ddbar psi)^n = c_t Vol tau_k(-phi_t + u_beta - s)/A e^{F_hat} omega^n,
/// sup psi = 0.
AuxiliaryResult solve_auxiliary(const SpectralTransform& st, const ProblemSpec& spec,
                                double t, double s, int k_smooth,
                                const PeriodicField& phi_t, const PeriodicField& u_beta,
                                const SolveOptions& opt = {});

}  // namespace neflab
