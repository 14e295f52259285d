#pragma once

#include "neflab/solver.hpp"

namespace neflab {

struct ConeMembership {
  int k = 1;
  // min over the grid and over j <= k of sigma_j(lambda)/binom(n,j);
  // positive iff the eigenvalue field lies in the open Gamma_k cone everywhere.
  double margin = 0.0;
  bool admissible() const { return margin > 0.0; }
};

struct AdmissibilityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ConeMembership gamma_k_check(const HermitianField& a, const HermMatrix& g, int k);

/// sigma_k family: (hat omega_t + i ddbar phi)^k wedge omega^{n-k} = c_t e^{F_hat} omega^n,
/// sup phi = 0. k = n coincides with solve_ma.
SolveResult solve_sigma_k(const SpectralTransform& st, const ProblemSpec& spec,
                          double t, int k, const SolveOptions& opt = {});

/// Gamma_k Berman approximation:
/// (hat omega_t + i ddbar u)^k wedge omega^{n-k} = c_t e^{beta u} omega^n.
SolveResult solve_beta_sigma_k(const SpectralTransform& st, const ProblemSpec& spec,
                               double t, int k, double beta, const SolveOptions& opt = {},
                               const PeriodicField* warm = nullptr, double warm_beta = 0.0);

struct BarrierReport {
  double c_prime = 0.0;        // constant in the log beta / beta barrier shift
  double convexity_margin = 0.0;  // min of S_k(tilde u form) - beta^{-n} S_k(u form)
  double barrier_gap = 0.0;       // max of tilde u - u_beta (should be <= tol)
  bool convexity_ok = false;
  bool upper_ok = false;
};

/// Verifies the barrier construction behind the log beta / beta convergence
/// rate: tilde u = u/beta + (1 - 1/beta) v - C' log beta / beta satisfies the
/// pointwise concavity inequality and tilde u <= u_beta.
BarrierReport barrier_verify(const SpectralTransform& st, const ProblemSpec& spec,
                             double t, int k, double beta,
                             const PeriodicField& u_kahler, const PeriodicField& v,
                             double tol = 1e-6, const SolveOptions& opt = {});

}  // namespace neflab
