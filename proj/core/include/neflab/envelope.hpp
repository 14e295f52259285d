#pragma once

#include "neflab/hessian_solver.hpp"
#include "neflab/ma_solver.hpp"

namespace neflab {

struct ScheduleTooShort : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EnvelopeResult {
  PeriodicField V;
  std::vector<double> beta_schedule;
  std::vector<double> sup_gaps;  // sup|u_{b+1} - u_b| between consecutive solves
  double fitted_C = 0.0;         // least-squares fit of gap = C log(beta)/beta
  double fit_residual = 0.0;     // relative residual of that fit
  double C_t = 0.0;              // measured sandwich constant (>= 0)
  double shift = 0.0;            // V = u_{beta_max} + shift
  double admissibility_margin = 0.0;  // Gamma_k margin of the form of V
  std::vector<PeriodicField> u_fields;
  // per-beta margins of the two-sided sandwich, >= 0 up to scheme accuracy:
  //   lower: min_X (V - (u_b - C_t/b))
  //   upper: min_X (u_b - [u0/b + (1-1/b)V - C_t log(b)/b]) for the Kähler
  //          reference u0 (barrier comparison)
  std::vector<double> lower_sandwich_margin;
  std::vector<double> upper_sandwich_margin;
};

/// Envelope V_t (k = n) or the Gamma_k envelope via the Berman scheme:
/// solve the beta-family along the schedule with warm starts, report
/// V = u_{beta_max} + C_t log(beta_max)/beta_max.
EnvelopeResult compute_envelope(const SpectralTransform& st, const ProblemSpec& spec,
                                double t, int k, const std::vector<double>& beta_schedule,
                                const SolveOptions& opt = {});

struct MonotonicityReport {
  std::vector<double> t_list;
  // worst violation of V_{t_i} <= V_{t_j} over consecutive pairs t_i < t_j
  double max_violation = 0.0;
  bool ok = false;
};

/// Sanity check that envelopes grow with t.
MonotonicityReport envelope_monotonicity_check(const SpectralTransform& st,
                                               const ProblemSpec& spec,
                                               const std::vector<double>& t_list, int k,
                                               const std::vector<double>& beta_schedule,
                                               double tol = 1e-6,
                                               const SolveOptions& opt = {});

}  // namespace neflab
