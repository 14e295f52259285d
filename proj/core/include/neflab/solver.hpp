#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "neflab/problem.hpp"

namespace neflab {

struct SolveOptions {
  double tol = 0.0;       // 0 -> 1e-9 for n = 1, 1e-7 for n = 2
  int max_newton = 60;
  int max_cg = 600;

  double resolve_tol(int n) const {
    if (tol > 0.0) return tol;
    return n == 1 ? 1e-9 : 1e-7;
  }
};

struct SolveResult {
  PeriodicField phi;
  double residual_sup = 0.0;
  int iterations = 0;
  // min over the grid of the admissibility margin of g^{-1}(hat omega_t + i ddbar phi):
  // smallest eigenvalue for Monge-Ampere (k = n), Gamma_k margin for sigma_k.
  double positivity_margin = 0.0;
  std::optional<double> beta;
  std::vector<double> residual_history;
};

struct SolveError : std::runtime_error {
  double last_residual;
  SolveError(const std::string& msg, double res)
      : std::runtime_error(msg), last_residual(res) {}
};

struct NonConvergence : SolveError {
  using SolveError::SolveError;
};

/// Line search could not keep the iterate inside the Kähler cone (k = n)
/// or the Gamma_k cone (k < n). Usually means t is too small for the grid,
/// or the continuation step was too large.
struct PositivityLoss : SolveError {
  using SolveError::SolveError;
};
using ConeLoss = PositivityLoss;

}  // namespace neflab
