#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

#include "cholesteric/grid.hpp"

namespace chol::detail {

// Batched real 3D transforms over `count` interleaved components. Buffers are
// owned here; callers fill real() or spectrum() and execute. Plans are created
// in the constructor, which is not thread-safe.
class Fft3 {
 public:
  Fft3(const TorusGrid& g, int count);
  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  std::size_t real_size() const { return nreal_; }
  std::size_t spectrum_size() const { return nspec_; }
  int count() const { return count_; }

  // Layout [site][component] and [mode][component].
  double* real() { return real_; }
  std::complex<double>* spectrum() { return reinterpret_cast<std::complex<double>*>(spec_); }

  // Unnormalized sum over sites of f(x) exp(-i k.x).
  void forward();
  // Unnormalized sum over the full spectrum; overwrites spectrum().
  void backward();

  /// Signed wavevector of half-spectrum mode h.
  std::array<int, 3> wavevector(std::size_t h) const;
  /// Multiplicity of mode h in the full spectrum sum (1 or 2).
  double weight(std::size_t h) const;

 private:
  TorusGrid grid_;
  int count_;
  std::size_t nreal_, nspec_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

std::array<int, 3> half_wavevector(const TorusGrid& g, std::size_t h);
std::size_t half_spectrum_size(const TorusGrid& g);

}  // namespace chol::detail
