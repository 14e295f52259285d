#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace neflab {

/// Uniform grid on the flat complex torus (R/Z)^{2n}, n complex dimensions,
/// N points per real axis. Axis order is (x1, y1[, x2, y2]) with x1 slowest,
/// row-major storage, so index = ((a0*N + a1)*N + a2)*N + a3 for n = 2.
struct Grid {
  int n = 1;
  int N = 8;

  Grid() = default;
  Grid(int n_, int N_) : n(n_), N(N_) { validate(); }

  void validate() const {
    if (n != 1 && n != 2)
      throw std::invalid_argument("Grid: complex dimension must be 1 or 2");
    if (N < 8 || (N & (N - 1)) != 0)
      throw std::invalid_argument("Grid: N must be a power of two, N >= 8");
  }

  int dims() const { return 2 * n; }

  std::size_t total() const {
    std::size_t t = 1;
    for (int d = 0; d < dims(); ++d) t *= static_cast<std::size_t>(N);
    return t;
  }

  /// Signed integer frequency for axis index a in [0, N).
  int freq(int a) const { return a < N / 2 ? a : a - N; }

  /// True at the unpaired Nyquist frequency (a == N/2); first derivatives
  /// of that mode are ambiguous and are dropped by the spectral calculus.
  bool is_nyquist(int a) const { return a == N / 2; }

  bool operator==(const Grid&) const = default;
};

}  // namespace neflab
