#include "neflab/hessian_solver.hpp"

#include <cmath>
#include <limits>

#include "newton.hpp"

namespace neflab {

ConeMembership gamma_k_check(const HermitianField& a, const HermMatrix& g, int k) {
  const int n = a.grid.n;
  if (k < 1 || k > n) throw std::invalid_argument("gamma_k_check: k out of range");
  ConeMembership cm;
  cm.k = k;
  if (n == 1 || k == 1) {
    PeriodicField s1 = sigma_k_ratio(a, g, 1);
    cm.margin = s1.inf();
    return cm;
  }
  PeriodicField s1 = sigma_k_ratio(a, g, 1);
  PeriodicField s2 = sigma_k_ratio(a, g, 2);
  cm.margin = std::min(s1.inf(), s2.inf());
  return cm;
}

SolveResult solve_sigma_k(const SpectralTransform& st, const ProblemSpec& spec,
                          double t, int k, const SolveOptions& opt) {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("solve_sigma_k: t in (0,1] required");
  if (k < 1 || k > spec.grid.n)
    throw std::invalid_argument("solve_sigma_k: k out of range");
  spec.validate();
  auto rhs_fn = [&](double tp) {
    double c = cohomology_constant(st, spec, tp, k);
    PeriodicField rhs = spec.F_hat;
    for (double& v : rhs.values) v = c * std::exp(v);
    return rhs;
  };
  SolveResult r = detail::continuation_solve_fixed(st, spec, t, k, rhs_fn, opt);
  r.phi += -r.phi.sup();
  return r;
}

SolveResult solve_beta_sigma_k(const SpectralTransform& st, const ProblemSpec& spec,
                               double t, int k, double beta, const SolveOptions& opt,
                               const PeriodicField* warm, double warm_beta) {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("solve_beta_sigma_k: t in (0,1] required");
  if (k < 1 || k > spec.grid.n)
    throw std::invalid_argument("solve_beta_sigma_k: k out of range");
  spec.validate();
  return detail::continuation_solve_beta(st, spec, t, k, beta, /*use_ct=*/true, opt,
                                         warm, warm_beta);
}

BarrierReport barrier_verify(const SpectralTransform& st, const ProblemSpec& spec,
                             double t, int k, double beta,
                             const PeriodicField& u_kahler, const PeriodicField& v,
                             double tol, const SolveOptions& opt) {
  const int n = spec.grid.n;
  const std::size_t tot = spec.grid.total();
  HermitianField ghat = hat_form(st, spec, t);

  HermitianField au = ghat + complex_hessian(st, u_kahler);
  if (detail::admissibility_margin(au, spec.g, n) <= 0.0)
    throw AdmissibilityFailure("barrier_verify: u is not a Kähler potential for hat omega_t");
  if (u_kahler.sup() > 1e-12)
    throw AdmissibilityFailure("barrier_verify: u must be nonpositive");
  HermitianField av = ghat + complex_hessian(st, v);
  if (!gamma_k_check(av, spec.g, k).admissible())
    throw AdmissibilityFailure("barrier_verify: v is not Gamma_k admissible");
  if (v.sup() > 1e-12)
    throw AdmissibilityFailure("barrier_verify: v must be nonpositive");

  BarrierReport rep;
  double c_t = cohomology_constant(st, spec, t, k);
  PeriodicField sku = sigma_k_ratio(au, spec.g, k);
  double m_u = sku.inf();

  // C' chosen so that e^{-C' log beta} <= beta^{-k} min S_k(u form) / c_t
  double logb = std::log(beta);
  if (logb > 0.0)
    rep.c_prime = std::max(0.0, (k * logb - std::log(m_u / c_t)) / logb);

  PeriodicField ut(spec.grid);
  double shift = (logb > 0.0) ? rep.c_prime * logb / beta : 0.0;
  for (std::size_t i = 0; i < tot; ++i)
    ut.values[i] = u_kahler.values[i] / beta + (1.0 - 1.0 / beta) * v.values[i] - shift;

  HermitianField at = ghat + complex_hessian(st, ut);
  PeriodicField skt = sigma_k_ratio(at, spec.g, k);
  double scale = std::pow(beta, -static_cast<double>(n));
  rep.convexity_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tot; ++i)
    rep.convexity_margin =
        std::min(rep.convexity_margin, skt.values[i] - scale * sku.values[i]);
  rep.convexity_ok = rep.convexity_margin >= -1e-12;

  SolveResult ub = solve_beta_sigma_k(st, spec, t, k, beta, opt);
  rep.barrier_gap = (ut - ub.phi).sup();
  rep.upper_ok = rep.barrier_gap <= tol;
  return rep;
}

}  // namespace neflab
