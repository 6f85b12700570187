#pragma once

#include <complex>
#include <vector>

#include "cholesteric/grid.hpp"
#include "cholesteric/kernels.hpp"

namespace chol {

using Mat5c = Eigen::Matrix<std::complex<double>, 5, 5>;

enum class Periodization {
  Spectral,    // Fourier coefficients of the lattice sum, K^(eps k), evaluated exactly
  LatticeSum,  // grid samples of eps^-3 sum_n K((x + 2 pi n)/eps), then a DFT
};

/// Kernel z -> eps^-3 K(z/eps) wrapped onto the torus, held as its Fourier
/// symbol on the half spectrum of the grid's real transform.
class PeriodizedKernel {
 public:
  PeriodizedKernel(const TorusGrid& g, double eps, std::vector<Mat5c> symbol, bool odd);

  const TorusGrid& grid() const { return grid_; }
  double eps() const { return eps_; }
  bool odd() const { return odd_; }
  bool is_zero() const { return zero_; }
  std::size_t spectrum_size() const { return symbol_.size(); }
  const Mat5c& symbol(std::size_t h) const { return symbol_[h]; }

  /// Sum over sites of h^3 K(x): the discrete integral of the periodized kernel.
  Mat5 mass() const;

  /// Real-space samples K(x_j) whose discrete convolution reproduces the
  /// symbol exactly. Layout matches TorusGrid indexing.
  std::vector<Mat5> real_space() const;

 private:
  TorusGrid grid_;
  double eps_;
  std::vector<Mat5c> symbol_;
  bool odd_;
  bool zero_;
};

/// Fourier transform of K over R^3 at wavevector kappa.
Mat5c kernel_transform(const OperatorKernel& k, const Vec3& kappa);

/// Throws std::invalid_argument for eps <= 0 and std::length_error when the
/// lattice sum would need more than 64 images per axis.
PeriodizedKernel periodize(const OperatorKernel& k, double eps, const TorusGrid& g,
                           Periodization mode = Periodization::Spectral);

/// sum_y h^3 K(x - y) B(y) by FFT.
std::vector<QTensor> convolve_fft(const std::vector<QTensor>& b, const PeriodizedKernel& k);

/// The same sum evaluated literally over site pairs. Refuses grids with any
/// extent above 12 (std::length_error).
std::vector<QTensor> convolve_direct(const std::vector<QTensor>& b, const PeriodizedKernel& k);

}  // namespace chol
