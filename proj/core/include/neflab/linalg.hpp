#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace neflab {

using cplx = std::complex<double>;

/// Small constant Hermitian matrix, n in {1, 2}. Only the upper triangle
/// (d0, d1, od = entry (0,1)) is stored; (1,0) is implied by conjugation.
struct HermMatrix {
  int n = 1;
  double d0 = 0.0;
  double d1 = 0.0;
  cplx od = 0.0;

  static HermMatrix zero(int n) { return HermMatrix{n, 0.0, 0.0, {0.0, 0.0}}; }
  static HermMatrix identity(int n) { return HermMatrix{n, 1.0, 1.0, {0.0, 0.0}}; }
  static HermMatrix diag(int n, double a, double b = 0.0) {
    return HermMatrix{n, a, b, {0.0, 0.0}};
  }

  double trace() const { return n == 1 ? d0 : d0 + d1; }
  double det() const { return n == 1 ? d0 : d0 * d1 - std::norm(od); }

  double min_eig() const {
    if (n == 1) return d0;
    double tr = d0 + d1;
    double disc = (d0 - d1) * (d0 - d1) + 4.0 * std::norm(od);
    return 0.5 * (tr - std::sqrt(disc));
  }
  double max_eig() const {
    if (n == 1) return d0;
    double tr = d0 + d1;
    double disc = (d0 - d1) * (d0 - d1) + 4.0 * std::norm(od);
    return 0.5 * (tr + std::sqrt(disc));
  }

  HermMatrix& operator+=(const HermMatrix& o) {
    d0 += o.d0; d1 += o.d1; od += o.od; return *this;
  }
  friend HermMatrix operator+(HermMatrix a, const HermMatrix& b) { return a += b; }
  friend HermMatrix operator*(double s, HermMatrix a) {
    a.d0 *= s; a.d1 *= s; a.od *= s; return a;
  }
};

/// Generalized eigenvalues of the pencil (a, g) for Hermitian a and
/// positive definite g, i.e. the eigenvalues of g^{-1} a (always real).
inline std::array<double, 2> gen_eigenvalues(const HermMatrix& a, const HermMatrix& g) {
  if (a.n == 1) return {a.d0 / g.d0, 0.0};
  double dg = g.det();
  double da = a.det();
  // det(a - l g) = 0  =>  dg*l^2 - mixed*l + da = 0
  double mixed = a.d0 * g.d1 + a.d1 * g.d0 - 2.0 * std::real(a.od * std::conj(g.od));
  double disc = mixed * mixed - 4.0 * dg * da;
  if (disc < 0.0) disc = 0.0;  // clamp roundoff; the pencil is Hermitian
  double sq = std::sqrt(disc);
  return {(mixed - sq) / (2.0 * dg), (mixed + sq) / (2.0 * dg)};
}

/// sigma_k(lambda) / binom(n, k) for the generalized eigenvalues of (a, g);
/// equals (a)^k wedge omega^{n-k} / omega^n.
inline double sigma_k_normalized(const HermMatrix& a, const HermMatrix& g, int k) {
  int n = a.n;
  if (k < 1 || k > n) throw std::invalid_argument("sigma_k: k out of range");
  if (n == 1) return a.d0 / g.d0;
  double dg = g.det();
  if (k == 2) return a.det() / dg;
  double mixed = a.d0 * g.d1 + a.d1 * g.d0 - 2.0 * std::real(a.od * std::conj(g.od));
  return 0.5 * mixed / dg;  // (l1 + l2)/2
}

}  // namespace neflab
