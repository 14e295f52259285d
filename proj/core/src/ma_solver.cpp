#include "neflab/ma_solver.hpp"

#include "newton.hpp"

namespace neflab {

SolveResult solve_ma(const SpectralTransform& st, const ProblemSpec& spec, double t,
                     const SolveOptions& opt) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("solve_ma: t in (0,1] required");
  spec.validate();
  const int n = spec.grid.n;
  auto rhs_fn = [&](double tp) {
    double c = cohomology_constant(st, spec, tp, n);
    PeriodicField rhs = spec.F_hat;
    for (double& v : rhs.values) v = c * std::exp(v);
    return rhs;
  };
  SolveResult r = detail::continuation_solve_fixed(st, spec, t, n, rhs_fn, opt);
  r.phi += -r.phi.sup();
  return r;
}

SolveResult solve_beta_ma(const SpectralTransform& st, const ProblemSpec& spec,
                          double t, double beta, const SolveOptions& opt,
                          const PeriodicField* warm, double warm_beta) {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("solve_beta_ma: t in (0,1] required");
  spec.validate();
  return detail::continuation_solve_beta(st, spec, t, spec.grid.n, beta,
                                         /*use_ct=*/false, opt, warm, warm_beta);
}

AuxiliaryResult solve_auxiliary(const SpectralTransform& st, const ProblemSpec& spec,
                                double t, double s, int k_smooth,
                                const PeriodicField& phi_t, const PeriodicField& u_beta,
                                const SolveOptions& opt) {
  if (s < 0.0) throw std::invalid_argument("solve_auxiliary: s >= 0 required");
  if (k_smooth < 1) throw std::invalid_argument("solve_auxiliary: k_smooth >= 1 required");
  const int n = spec.grid.n;
  const std::size_t tot = spec.grid.total();
  const double vol = spec.vol();

  PeriodicField tau(spec.grid);
  for (std::size_t i = 0; i < tot; ++i)
    tau.values[i] = tau_smooth(-phi_t.values[i] + u_beta.values[i] - s, k_smooth);
  PeriodicField tau_weighted = tau;
  for (std::size_t i = 0; i < tot; ++i)
    tau_weighted.values[i] *= std::exp(spec.F_hat.values[i]);
  double A = integrate(tau_weighted, spec.g);

  auto rhs_fn = [&](double tp) {
    double c = cohomology_constant(st, spec, tp, n);
    PeriodicField rhs = tau_weighted;
    rhs *= c * vol / A;
    return rhs;
  };
  // phi_t is admissible for hat omega_t, so it is a valid warm start at t itself.
  SolveResult r = detail::continuation_solve_fixed(st, spec, t, n, rhs_fn, opt, &phi_t);
  r.phi += -r.phi.sup();
  return AuxiliaryResult{std::move(r), A};
}

}  // namespace neflab
