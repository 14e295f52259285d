#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "neflab/grid.hpp"
#include "neflab/linalg.hpp"

namespace neflab {

/// Real scalar function on the discrete torus.
struct PeriodicField {
  Grid grid;
  std::vector<double> values;

  PeriodicField() = default;
  explicit PeriodicField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.total(), fill) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double sup() const { return *std::max_element(values.begin(), values.end()); }
  double inf() const { return *std::min_element(values.begin(), values.end()); }
  double sup_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }

  PeriodicField& operator+=(double c) {
    for (double& v : values) v += c;
    return *this;
  }
  PeriodicField& operator+=(const PeriodicField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  PeriodicField& operator-=(const PeriodicField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  PeriodicField& operator*=(double s) {
    for (double& v : values) v *= s;
    return *this;
  }
  friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
  friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
};

/// Hermitian n x n matrix per grid point; upper triangle stored per point,
/// packed (0,0) for n = 1 and (0,0), (0,1), (1,1) for n = 2.
struct HermitianField {
  Grid grid;
  std::vector<cplx> entries;

  HermitianField() = default;
  explicit HermitianField(const Grid& g)
      : grid(g), entries(g.total() * tri_count(g.n), cplx{0.0, 0.0}) {}

  static int tri_count(int n) { return n * (n + 1) / 2; }
  int tri() const { return tri_count(grid.n); }

  HermMatrix at(std::size_t i) const {
    HermMatrix m = HermMatrix::zero(grid.n);
    const cplx* e = entries.data() + i * tri();
    m.d0 = e[0].real();
    if (grid.n == 2) {
      m.od = e[1];
      m.d1 = e[2].real();
    }
    return m;
  }

  void set(std::size_t i, const HermMatrix& m) {
    cplx* e = entries.data() + i * tri();
    e[0] = m.d0;
    if (grid.n == 2) {
      e[1] = m.od;
      e[2] = m.d1;
    }
  }

  /// a + m for a constant Hermitian m, pointwise.
  void add_constant(const HermMatrix& m) {
    const std::size_t t = grid.total();
    for (std::size_t i = 0; i < t; ++i) {
      cplx* e = entries.data() + i * tri();
      e[0] += m.d0;
      if (grid.n == 2) {
        e[1] += m.od;
        e[2] += m.d1;
      }
    }
  }

  HermitianField& operator+=(const HermitianField& o) {
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i] += o.entries[i];
    return *this;
  }
  friend HermitianField operator+(HermitianField a, const HermitianField& b) { return a += b; }
};

}  // namespace neflab
