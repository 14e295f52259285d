#include "neflab/fft.hpp"

#include <fftw3.h>

#include <cstring>

namespace neflab {

struct SpectralTransform::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t total = 0;

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

SpectralTransform::SpectralTransform(const Grid& grid)
    : grid_(grid), impl_(std::make_unique<Impl>()) {
  grid_.validate();
  impl_->total = grid_.total();
  impl_->in = fftw_alloc_complex(impl_->total);
  impl_->out = fftw_alloc_complex(impl_->total);
  int rank = grid_.dims();
  int dims[4] = {grid_.N, grid_.N, grid_.N, grid_.N};
  impl_->fwd = fftw_plan_dft(rank, dims, impl_->in, impl_->out,
                             FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft(rank, dims, impl_->in, impl_->out,
                             FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() = default;

std::vector<cplx> SpectralTransform::forward(const PeriodicField& u) const {
  const std::size_t t = impl_->total;
  for (std::size_t i = 0; i < t; ++i) {
    impl_->in[i][0] = u.values[i];
    impl_->in[i][1] = 0.0;
  }
  fftw_execute(impl_->fwd);
  std::vector<cplx> spec(t);
  std::memcpy(spec.data(), impl_->out, t * sizeof(cplx));
  return spec;
}

std::vector<cplx> SpectralTransform::forward(const std::vector<cplx>& u) const {
  const std::size_t t = impl_->total;
  std::memcpy(impl_->in, u.data(), t * sizeof(cplx));
  fftw_execute(impl_->fwd);
  std::vector<cplx> spec(t);
  std::memcpy(spec.data(), impl_->out, t * sizeof(cplx));
  return spec;
}

PeriodicField SpectralTransform::inverse_real(const std::vector<cplx>& spec) const {
  const std::size_t t = impl_->total;
  std::memcpy(impl_->in, spec.data(), t * sizeof(cplx));
  fftw_execute(impl_->bwd);
  PeriodicField u(grid_);
  const double inv = 1.0 / static_cast<double>(t);
  for (std::size_t i = 0; i < t; ++i) u.values[i] = impl_->out[i][0] * inv;
  return u;
}

std::vector<cplx> SpectralTransform::inverse(const std::vector<cplx>& spec) const {
  const std::size_t t = impl_->total;
  std::memcpy(impl_->in, spec.data(), t * sizeof(cplx));
  fftw_execute(impl_->bwd);
  std::vector<cplx> u(t);
  const double inv = 1.0 / static_cast<double>(t);
  for (std::size_t i = 0; i < t; ++i)
    u[i] = cplx(impl_->out[i][0] * inv, impl_->out[i][1] * inv);
  return u;
}

}  // namespace neflab
