#include "cholesteric/sphere_quadrature.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <gsl/gsl_integration.h>

namespace chol {

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  if (!t) throw std::runtime_error("gauss_legendre: table allocation failed");
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &x[i], &w[i], t);
  gsl_integration_glfixed_table_free(t);
}

SphereQuadrature::SphereQuadrature(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 2 || n_theta % 2 != 0 || n_phi < 8 || n_phi % 8 != 0) {
    throw std::invalid_argument("SphereQuadrature: need even n_theta and n_phi divisible by 8");
  }
  std::vector<double> ct, wt;
  gauss_legendre(n_theta, -1.0, 1.0, ct, wt);
  const double dphi = 2.0 * std::numbers::pi / n_phi;

  nodes_.reserve(static_cast<size_t>(n_theta) * n_phi);
  weights_.reserve(nodes_.capacity());
  for (int i = 0; i < n_theta; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - ct[i] * ct[i]));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * dphi;
      nodes_.emplace_back(st * std::cos(phi), st * std::sin(phi), ct[i]);
      weights_.push_back(wt[i] * dphi);
    }
  }

  // First octant: positive cos(theta) nodes and azimuths in (0, pi/2).
  for (int i = 0; i < n_theta; ++i) {
    if (ct[i] <= 0.0) continue;
    const double st2 = 1.0 - ct[i] * ct[i];
    for (int j = 0; j < n_phi / 4; ++j) {
      const double phi = (j + 0.5) * dphi;
      const double c = std::cos(phi), s = std::sin(phi);
      ox2_.push_back(st2 * c * c);
      oy2_.push_back(st2 * s * s);
      oz2_.push_back(ct[i] * ct[i]);
      ow_.push_back(8.0 * wt[i] * dphi);
    }
  }
}

int SphereQuadrature::degree() const { return std::min(2 * n_theta_ - 1, n_phi_ - 1); }

SphereQuadrature SphereQuadrature::with_degree(int degree) {
  if (degree < 3) throw std::invalid_argument("SphereQuadrature: degree must be at least 3");
  int nt = (degree + 2) / 2;
  nt += nt % 2;
  const int np = (degree + 8) / 8 * 8;
  return SphereQuadrature(nt, np);
}

const SphereQuadrature& SphereQuadrature::standard() {
  static const SphereQuadrature q(64, 128);
  return q;
}

}  // namespace chol
