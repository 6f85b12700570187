#pragma once

#include <vector>

namespace chol {

/// Isotropic scalar profile f(|z|).
class RadialProfile {
 public:
  enum class Family { Zero, Gaussian, Exponential, Tabulated };

  RadialProfile() = default;  // identically zero

  /// amplitude * exp(-(r/width)^2)
  static RadialProfile gaussian(double amplitude, double width);
  /// amplitude * exp(-rate r)
  static RadialProfile exponential(double amplitude, double rate);
  /// Piecewise linear through (radii, values), zero beyond the last radius.
  static RadialProfile tabulated(std::vector<double> radii, std::vector<double> values);

  double operator()(double r) const;

  Family family() const { return family_; }
  bool is_zero() const;
  double amplitude() const { return a_; }
  double width() const { return w_; }  // gaussian width, or exponential rate
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }

  /// Radius beyond which every moment up to r^10 has a relative tail below ~1e-15.
  double cutoff() const;
  /// Points where the profile is not smooth, inside [0, cutoff()].
  std::vector<double> breakpoints() const;

  /// Integral of f(r) r^j over [0, inf), adaptive Gauss-Kronrod.
  double moment(int j) const;

  RadialProfile scaled(double c) const;

 private:
  Family family_ = Family::Zero;
  double a_ = 0.0;
  double w_ = 1.0;
  std::vector<double> radii_, values_;
};

}  // namespace chol
