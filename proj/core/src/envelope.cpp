#include "neflab/envelope.hpp"

#include <cmath>
#include <limits>

namespace neflab {

EnvelopeResult compute_envelope(const SpectralTransform& st, const ProblemSpec& spec,
                                double t, int k, const std::vector<double>& beta_schedule,
                                const SolveOptions& opt) {
  if (beta_schedule.size() < 3)
    throw ScheduleTooShort("compute_envelope: beta schedule needs at least 3 entries");
  for (std::size_t i = 0; i + 1 < beta_schedule.size(); ++i)
    if (!(beta_schedule[i] < beta_schedule[i + 1]))
      throw std::invalid_argument("compute_envelope: beta schedule must increase");
  const int n = spec.grid.n;
  if (k < 1 || k > n) throw std::invalid_argument("compute_envelope: k out of range");

  EnvelopeResult res;
  res.beta_schedule = beta_schedule;

  // Measured max-principle constant: beta u_beta <= log(sup S_k(ghat_t)/c_eff).
  double c_eff = (k == n) ? 1.0 : cohomology_constant(st, spec, t, k);
  {
    HermitianField ghat = hat_form(st, spec, t);
    double sup_ratio = sigma_k_ratio(ghat, spec.g, k).sup();
    res.C_t = std::max(0.0, std::log(sup_ratio / c_eff));
  }

  auto solve_one = [&](double beta, const PeriodicField* warm, double warm_beta) {
    if (k == n)
      return solve_beta_ma(st, spec, t, beta, opt, warm, warm_beta);
    return solve_beta_sigma_k(st, spec, t, k, beta, opt, warm, warm_beta);
  };

  const PeriodicField* warm = nullptr;
  double warm_beta = 0.0;
  for (double beta : beta_schedule) {
    SolveResult r = solve_one(beta, warm, warm_beta);
    res.u_fields.push_back(std::move(r.phi));
    warm = &res.u_fields.back();
    warm_beta = beta;
  }

  for (std::size_t i = 0; i + 1 < res.u_fields.size(); ++i)
    res.sup_gaps.push_back((res.u_fields[i + 1] - res.u_fields[i]).sup_abs());

  // gap_i ~ C log(beta_i)/beta_i, least squares through the origin
  {
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < res.sup_gaps.size(); ++i) {
      double x = std::log(beta_schedule[i]) / beta_schedule[i];
      double y = res.sup_gaps[i];
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    if (syy > 1e-24) {
      res.fitted_C = sxy / sxx;
      double r2 = 0.0;
      for (std::size_t i = 0; i < res.sup_gaps.size(); ++i) {
        double x = std::log(beta_schedule[i]) / beta_schedule[i];
        double d = res.sup_gaps[i] - res.fitted_C * x;
        r2 += d * d;
      }
      res.fit_residual = std::sqrt(r2 / syy);
    }
  }

  // Kähler reference potential for the barrier: the first (most regular)
  // iterate, forced <= 0. Later iterates hug the cone boundary too closely.
  PeriodicField u0 = res.u_fields.front();
  u0 += -std::max(0.0, u0.sup());

  // The measured lower constant can undershoot the upper-rate constant of the
  // barrier argument; widen by the fitted empirical rate and by the barrier
  // largeness condition e^{-C log beta} <= beta^{-k} min S_k(u0 form)/c_eff.
  res.C_t = std::max(res.C_t, 1.5 * std::max(res.fitted_C, 0.0));
  {
    HermitianField a0 = hat_form(st, spec, t) + complex_hessian(st, u0);
    double m_u = sigma_k_ratio(a0, spec.g, k).inf();
    if (m_u > 0.0) {
      for (double beta : beta_schedule) {
        double lb = std::log(beta);
        if (lb <= 0.0) continue;
        res.C_t = std::max(res.C_t, k - std::log(m_u / c_eff) / lb);
      }
    }
  }

  // Shift by the measured rate constant, not the (possibly much larger)
  // barrier constant, so V tracks u_{beta_max} at the scheme's own accuracy.
  double bmax = beta_schedule.back();
  res.shift = 1.5 * std::max(res.fitted_C, 0.0) * std::log(bmax) / bmax;
  res.V = res.u_fields.back();
  res.V += res.shift;

  {
    HermitianField av = hat_form(st, spec, t) + complex_hessian(st, res.V);
    res.admissibility_margin = gamma_k_check(av, spec.g, k).margin;
  }

  // nonpositive representative of V for the barrier comparison
  PeriodicField v0 = res.V;
  v0 += -std::max(0.0, v0.sup());
  for (std::size_t i = 0; i < res.u_fields.size(); ++i) {
    double b = beta_schedule[i];
    const PeriodicField& u = res.u_fields[i];
    double lo = std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < u.size(); ++j) {
      lo = std::min(lo, res.V[j] - (u[j] - res.C_t / b));
      // barrier comparison u0/b + (1-1/b)v0 - C_t log(b)/b <= u_b
      double ub_barrier =
          u0[j] / b + (1.0 - 1.0 / b) * v0[j] - res.C_t * std::log(b) / b;
      hi = std::min(hi, u[j] - ub_barrier);
    }
    res.lower_sandwich_margin.push_back(lo);
    res.upper_sandwich_margin.push_back(hi);
  }
  return res;
}

MonotonicityReport envelope_monotonicity_check(const SpectralTransform& st,
                                               const ProblemSpec& spec,
                                               const std::vector<double>& t_list, int k,
                                               const std::vector<double>& beta_schedule,
                                               double tol, const SolveOptions& opt) {
  for (std::size_t i = 0; i + 1 < t_list.size(); ++i)
    if (!(t_list[i] < t_list[i + 1]))
      throw std::invalid_argument("envelope_monotonicity_check: t_list must increase");
  MonotonicityReport rep;
  rep.t_list = t_list;
  std::vector<PeriodicField> envs;
  for (double t : t_list)
    envs.push_back(compute_envelope(st, spec, t, k, beta_schedule, opt).V);
  for (std::size_t i = 0; i + 1 < envs.size(); ++i)
    rep.max_violation = std::max(rep.max_violation, (envs[i] - envs[i + 1]).sup());
  rep.ok = rep.max_violation <= tol;
  return rep;
}

}  // namespace neflab
