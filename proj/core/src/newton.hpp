#pragma once

// Internal damped Newton driver for the generalized equation
//   S_k(ghat + i ddbar u) = rhs + c_exp * e^{beta u}
// shared by the Monge-Ampere and sigma_k solvers.

#include <functional>

#include "neflab/solver.hpp"

namespace neflab::detail {

struct EquationSpec {
  int k = 1;
  const HermitianField* ghat = nullptr;  // background form hat omega_t
  const HermMatrix* g = nullptr;
  const PeriodicField* rhs = nullptr;    // fixed RHS part; null means zero
  double beta = 0.0;                     // 0 disables the exponential term
  double c_exp = 0.0;
  bool fix_mean = false;                 // equation invariant under constants
};

/// Gamma_k admissibility margin of the matrix field a relative to g:
/// min over points of min_{j<=k} sigma_j(lambda)/binom(n,j); for k = n
/// (Monge-Ampere) the smallest generalized eigenvalue is used instead.
double admissibility_margin(const HermitianField& a, const HermMatrix& g, int k);

/// Pointwise derivative matrix W of S_k at a, so that the linearization of
/// S_k in direction H is tr(W H).
HermitianField linearization_weight(const HermitianField& a, const HermMatrix& g, int k);

SolveResult newton_solve(const SpectralTransform& st, const EquationSpec& eq,
                         PeriodicField initial, const SolveOptions& opt);

/// Fixed-RHS family S_k(ghat_t + Hess phi) = rhs(t), solved with a damped
/// Newton iteration and continuation in t from an admissible starting time.
/// rhs_fn(t') builds the right-hand side at a continuation rung. The result
/// is NOT sup-normalized.
SolveResult continuation_solve_fixed(
    const SpectralTransform& st, const ProblemSpec& spec, double t, int k,
    const std::function<PeriodicField(double)>& rhs_fn, const SolveOptions& opt,
    const PeriodicField* warm = nullptr);

/// Exponential family S_k(ghat_t + Hess u) = c(t) e^{beta u}, with
/// continuation first in t (at small beta), then in beta up to the target.
/// use_ct selects c(t) = c_t (sigma_k approximation) versus c = 1 (the
/// Monge-Ampere Berman equation). warm/warm_beta give a starting iterate
/// from a previous solve in the same beta sweep.
SolveResult continuation_solve_beta(
    const SpectralTransform& st, const ProblemSpec& spec, double t, int k,
    double beta, bool use_ct, const SolveOptions& opt,
    const PeriodicField* warm = nullptr, double warm_beta = 0.0);

}  // namespace neflab::detail
