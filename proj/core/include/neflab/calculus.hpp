#pragma once

#include <vector>

#include "neflab/fft.hpp"

namespace neflab {

/// Visit every Fourier mode with its complex frequencies c_j = m_{x_j} + i m_{y_j}
/// (Nyquist components zeroed). f is called as f(flat_index, c1, c2); c2 is
/// zero for n = 1.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  const int N = g.N;
  auto comp = [&](int a) -> double {
    return g.is_nyquist(a) ? 0.0 : static_cast<double>(g.freq(a));
  };
  std::size_t idx = 0;
  if (g.n == 1) {
    for (int a0 = 0; a0 < N; ++a0) {
      double mx = comp(a0);
      for (int a1 = 0; a1 < N; ++a1, ++idx)
        f(idx, cplx(mx, comp(a1)), cplx(0.0, 0.0));
    }
  } else {
    for (int a0 = 0; a0 < N; ++a0) {
      double mx1 = comp(a0);
      for (int a1 = 0; a1 < N; ++a1) {
        cplx c1(mx1, comp(a1));
        for (int a2 = 0; a2 < N; ++a2) {
          double mx2 = comp(a2);
          for (int a3 = 0; a3 < N; ++a3, ++idx)
            f(idx, c1, cplx(mx2, comp(a3)));
        }
      }
    }
  }
}

/// Complex Hessian (d^2 u / dz_j dz_bar_k) by spectral differentiation.
HermitianField complex_hessian(const SpectralTransform& st, const PeriodicField& u);

/// Same, starting from precomputed DFT coefficients of u.
HermitianField hessian_from_spectrum(const SpectralTransform& st,
                                     const std::vector<cplx>& uhat);

/// Total volume Vol = integral of 1 against omega^n; normalized to det(g).
double volume(const Grid& grid, const HermMatrix& g);

/// Uniform-weight quadrature of f against omega^n: mean(f) * det(g).
double integrate(const PeriodicField& f, const HermMatrix& g);

/// Pointwise det(g^{-1} a).
PeriodicField det_ratio(const HermitianField& a, const HermMatrix& g);

/// Pointwise sigma_k(lambda)/binom(n,k) for lambda = eigenvalues of g^{-1} a;
/// k = n coincides with det_ratio.
PeriodicField sigma_k_ratio(const HermitianField& a, const HermMatrix& g, int k);

}  // namespace neflab
