#include "neflab/problem.hpp"

#include <cmath>

namespace neflab {

NefClassSpec NefClassSpec::make(const HermMatrix& chi0, PeriodicField rho) {
  NefClassSpec s;
  s.chi0 = chi0;
  s.rho = std::move(rho);
  s.nu = 0;
  auto eig = gen_eigenvalues(chi0, HermMatrix::identity(chi0.n));
  for (int j = 0; j < chi0.n; ++j)
    if (eig[j] > 1e-10) ++s.nu;
  s.validate();
  return s;
}

void NefClassSpec::validate() const {
  if (chi0.min_eig() < -1e-12)
    throw std::invalid_argument("NefClassSpec: chi0 must be positive semidefinite");
  if (!rho.all_finite())
    throw std::invalid_argument("NefClassSpec: rho has non-finite values");
}

void ProblemSpec::validate() const {
  grid.validate();
  nef.validate();
  if (g.n != grid.n || nef.chi0.n != grid.n)
    throw std::invalid_argument("ProblemSpec: matrix dimension mismatch");
  if (g.min_eig() <= 0.0)
    throw std::invalid_argument("ProblemSpec: g must be positive definite");
  if (!(p > grid.n))
    throw std::invalid_argument("ProblemSpec: p > n required");
  if (!F_raw.all_finite())
    throw std::invalid_argument("ProblemSpec: F_raw has non-finite values");
}

void ProblemSpec::normalize_density() {
  // F_hat = F_raw + log(Vol / int e^{F_raw} omega^n) = F_raw - log mean(e^{F_raw})
  double m = 0.0;
  for (double v : F_raw.values) m += std::exp(v);
  m /= static_cast<double>(F_raw.size());
  F_hat = F_raw;
  F_hat += -std::log(m);
}

HermitianField chi_form(const SpectralTransform& st, const ProblemSpec& spec) {
  HermitianField h = complex_hessian(st, spec.nef.rho);
  h.add_constant(spec.nef.chi0);
  return h;
}

HermitianField hat_form(const SpectralTransform& st, const ProblemSpec& spec, double t) {
  HermitianField h = chi_form(st, spec);
  h.add_constant(t * spec.g);
  return h;
}

double cohomology_constant(const SpectralTransform& st, const ProblemSpec& spec,
                           double t, int k) {
  if (t <= 0.0) throw std::invalid_argument("cohomology_constant: t must be > 0");
  if (k < 1 || k > spec.grid.n)
    throw std::invalid_argument("cohomology_constant: k out of range");
  HermitianField h = hat_form(st, spec, t);
  return integrate(sigma_k_ratio(h, spec.g, k), spec.g) / spec.vol();
}

}  // namespace neflab
