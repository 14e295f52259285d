#pragma once

#include "neflab/calculus.hpp"

namespace neflab {

/// Nef class data: chi = chi0 + i ddbar rho with chi0 constant psd.
/// nu = rank(chi0) is the numerical dimension of [chi].
struct NefClassSpec {
  HermMatrix chi0;
  PeriodicField rho;
  int nu = 0;

  static NefClassSpec make(const HermMatrix& chi0, PeriodicField rho);
  void validate() const;
};

/// Full experiment description on one torus.
struct ProblemSpec {
  Grid grid;
  HermMatrix g;  // Kähler form omega, constant positive definite
  NefClassSpec nef;
  PeriodicField F_raw;
  PeriodicField F_hat;  // normalized so that int e^{F_hat} omega^n = Vol
  double p = 3.0;

  void validate() const;
  /// Recompute F_hat from F_raw.
  void normalize_density();
  double vol() const { return volume(grid, g); }
};

/// chi0 + i ddbar rho (the t-independent part of hat omega_t).
HermitianField chi_form(const SpectralTransform& st, const ProblemSpec& spec);

/// hat omega_t = chi0 + i ddbar rho + t omega, as a matrix field.
HermitianField hat_form(const SpectralTransform& st, const ProblemSpec& spec, double t);

/// c_t = int S_k(hat omega_t) omega^n / int e^{F_hat} omega^n. Independent of
/// rho by exactness; behaves like t^{k - min(k, nu)} as t -> 0.
double cohomology_constant(const SpectralTransform& st, const ProblemSpec& spec,
                           double t, int k);

}  // namespace neflab
