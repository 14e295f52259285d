#include "neflab/calculus.hpp"

#include <numbers>

namespace neflab {

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
}

HermitianField hessian_from_spectrum(const SpectralTransform& st,
                                     const std::vector<cplx>& uhat) {
  const Grid& g = st.grid();
  const std::size_t t = g.total();
  HermitianField h(g);

  // One inverse transform per upper-triangle entry. Multiplier for
  // d^2/dz_j dz_bar_k is -pi^2 conj(c_j) c_k.
  std::vector<cplx> spec(t);
  auto fill_entry = [&](int j, int k, int slot) {
    for_each_mode(g, [&](std::size_t i, cplx c1, cplx c2) {
      cplx cj = (j == 0) ? c1 : c2;
      cplx ck = (k == 0) ? c1 : c2;
      spec[i] = -kPi2 * std::conj(cj) * ck * uhat[i];
    });
    std::vector<cplx> e = st.inverse(spec);
    const int tri = h.tri();
    const bool diag = (j == k);
    for (std::size_t i = 0; i < t; ++i)
      h.entries[i * tri + slot] = diag ? cplx(e[i].real(), 0.0) : e[i];
  };

  fill_entry(0, 0, 0);
  if (g.n == 2) {
    fill_entry(0, 1, 1);
    fill_entry(1, 1, 2);
  }
  return h;
}

HermitianField complex_hessian(const SpectralTransform& st, const PeriodicField& u) {
  return hessian_from_spectrum(st, st.forward(u));
}

double volume(const Grid& grid, const HermMatrix& g) {
  (void)grid;
  return g.det();
}

double integrate(const PeriodicField& f, const HermMatrix& g) {
  return f.mean() * g.det();
}

PeriodicField det_ratio(const HermitianField& a, const HermMatrix& g) {
  const std::size_t t = a.grid.total();
  PeriodicField r(a.grid);
  const double inv_dg = 1.0 / g.det();
  const int tri = a.tri();
  const cplx* e = a.entries.data();
  if (a.grid.n == 1) {
    for (std::size_t i = 0; i < t; ++i) r.values[i] = e[i * tri].real() * inv_dg;
  } else {
    for (std::size_t i = 0; i < t; ++i) {
      const cplx* m = e + i * tri;
      r.values[i] = (m[0].real() * m[2].real() - std::norm(m[1])) * inv_dg;
    }
  }
  return r;
}

PeriodicField sigma_k_ratio(const HermitianField& a, const HermMatrix& g, int k) {
  const int n = a.grid.n;
  if (k < 1 || k > n) throw std::invalid_argument("sigma_k_ratio: k out of range");
  if (k == n) return det_ratio(a, g);
  // remaining case: n = 2, k = 1 (normalized trace)
  const std::size_t t = a.grid.total();
  PeriodicField r(a.grid);
  const double inv_dg = 1.0 / g.det();
  const int tri = a.tri();
  for (std::size_t i = 0; i < t; ++i) {
    const cplx* m = a.entries.data() + i * tri;
    double mixed = m[0].real() * g.d1 + m[2].real() * g.d0 -
                   2.0 * std::real(m[1] * std::conj(g.od));
    r.values[i] = 0.5 * mixed * inv_dg;
  }
  return r;
}

}  // namespace neflab
