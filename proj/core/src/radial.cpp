#include "cholesteric/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace chol {

RadialProfile RadialProfile::gaussian(double amplitude, double width) {
  if (!std::isfinite(amplitude) || !(width > 0.0) || !std::isfinite(width)) {
    throw std::invalid_argument("gaussian profile needs finite amplitude and positive width");
  }
  RadialProfile p;
  p.family_ = Family::Gaussian;
  p.a_ = amplitude;
  p.w_ = width;
  return p;
}

RadialProfile RadialProfile::exponential(double amplitude, double rate) {
  if (!std::isfinite(amplitude) || !(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential profile needs finite amplitude and positive rate");
  }
  RadialProfile p;
  p.family_ = Family::Exponential;
  p.a_ = amplitude;
  p.w_ = rate;
  return p;
}

RadialProfile RadialProfile::tabulated(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() < 2 || radii.size() != values.size()) {
    throw std::invalid_argument("tabulated profile needs matching radii/values with at least two points");
  }
  if (radii.front() < 0.0) throw std::invalid_argument("tabulated profile radii must be non-negative");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("tabulated profile radii must increase");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("tabulated profile values must be finite");
  }
  RadialProfile p;
  p.family_ = Family::Tabulated;
  p.radii_ = std::move(radii);
  p.values_ = std::move(values);
  return p;
}

double RadialProfile::operator()(double r) const {
  switch (family_) {
    case Family::Zero:
      return 0.0;
    case Family::Gaussian: {
      const double x = r / w_;
      return a_ * std::exp(-x * x);
    }
    case Family::Exponential:
      return a_ * std::exp(-w_ * r);
    case Family::Tabulated: {
      if (r < radii_.front() || r > radii_.back()) return 0.0;
      auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
      if (it == radii_.end()) return values_.back();
      const std::size_t i = static_cast<std::size_t>(it - radii_.begin());
      const double t = (r - radii_[i - 1]) / (radii_[i] - radii_[i - 1]);
      return (1.0 - t) * values_[i - 1] + t * values_[i];
    }
  }
  return 0.0;
}

bool RadialProfile::is_zero() const {
  if (family_ == Family::Zero) return true;
  if (family_ == Family::Tabulated) {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }
  return a_ == 0.0;
}

double RadialProfile::cutoff() const {
  switch (family_) {
    case Family::Zero:
      return 0.0;
    case Family::Gaussian:
      return 9.0 * w_;
    case Family::Exponential:
      return 70.0 / w_;
    case Family::Tabulated:
      return radii_.back();
  }
  return 0.0;
}

std::vector<double> RadialProfile::breakpoints() const {
  if (family_ == Family::Tabulated) return radii_;
  return {};
}

double RadialProfile::moment(int j) const {
  if (is_zero()) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double r) { return (*this)(r) * std::pow(r, j); };
  std::vector<double> pts = breakpoints();
  pts.push_back(0.0);
  pts.push_back(cutoff());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    total += gauss_kronrod<double, 61>::integrate(f, pts[i - 1], pts[i], 10, 1e-14);
  }
  return total;
}

RadialProfile RadialProfile::scaled(double c) const {
  RadialProfile p = *this;
  p.a_ *= c;
  for (double& v : p.values_) v *= c;
  return p;
}

}  // namespace chol
