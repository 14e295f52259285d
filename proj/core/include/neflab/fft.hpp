#pragma once

#include <memory>
#include <vector>

#include "neflab/field.hpp"

namespace neflab {

/// Forward/backward complex DFT on the torus grid. One instance owns its
/// FFTW plans and scratch buffers; reuse it for repeated transforms on the
/// same grid. Not safe for concurrent use by multiple threads.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const Grid& grid() const { return grid_; }

  /// DFT coefficients of a real field (unnormalized, FFTW convention).
  std::vector<cplx> forward(const PeriodicField& u) const;
  std::vector<cplx> forward(const std::vector<cplx>& u) const;

  /// Inverse DFT / total, real part.
  PeriodicField inverse_real(const std::vector<cplx>& spec) const;
  /// Inverse DFT / total, complex output.
  std::vector<cplx> inverse(const std::vector<cplx>& spec) const;

 private:
  Grid grid_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace neflab
