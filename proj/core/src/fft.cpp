#include "fft.hpp"

#include <new>

namespace chol::detail {

std::size_t half_spectrum_size(const TorusGrid& g) {
  return static_cast<std::size_t>(g.extent(0)) * g.extent(1) * (g.extent(2) / 2 + 1);
}

std::array<int, 3> half_wavevector(const TorusGrid& g, std::size_t h) {
  const int n3h = g.extent(2) / 2 + 1;
  const int l = static_cast<int>(h % n3h);
  h /= n3h;
  const int j = static_cast<int>(h % g.extent(1));
  const int i = static_cast<int>(h / g.extent(1));
  auto sign = [](int idx, int n) { return idx <= n / 2 ? idx : idx - n; };
  return {sign(i, g.extent(0)), sign(j, g.extent(1)), l};
}

Fft3::Fft3(const TorusGrid& g, int count)
    : grid_(g), count_(count), nreal_(g.size()), nspec_(half_spectrum_size(g)) {
  real_ = fftw_alloc_real(nreal_ * count_);
  spec_ = fftw_alloc_complex(nspec_ * count_);
  if (!real_ || !spec_) throw std::bad_alloc();
  const int n[3] = {g.extent(0), g.extent(1), g.extent(2)};
  fwd_ = fftw_plan_many_dft_r2c(3, n, count_, real_, nullptr, count_, 1, spec_, nullptr, count_, 1, FFTW_ESTIMATE);
  bwd_ = fftw_plan_many_dft_c2r(3, n, count_, spec_, nullptr, count_, 1, real_, nullptr, count_, 1, FFTW_ESTIMATE);
}

Fft3::~Fft3() {
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(real_);
  fftw_free(spec_);
}

void Fft3::forward() { fftw_execute(fwd_); }
void Fft3::backward() { fftw_execute(bwd_); }

std::array<int, 3> Fft3::wavevector(std::size_t h) const { return half_wavevector(grid_, h); }

double Fft3::weight(std::size_t h) const {
  const int l = static_cast<int>(h % (grid_.extent(2) / 2 + 1));
  return (l == 0 || l == grid_.extent(2) / 2) ? 1.0 : 2.0;
}

}  // namespace chol::detail
