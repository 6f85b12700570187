#pragma once

#include <vector>

#include "cholesteric/qtensor.hpp"

namespace chol {

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times a
/// uniform (midpoint) rule in azimuth. Weights sum to 4*pi.
///
/// Alongside the full rule it keeps the octant fold of the same nodes, which
/// integrates functions that are even in each Cartesian coordinate with one
/// eighth of the work. Both n_theta and n_phi/4 must be even for the fold.
class SphereQuadrature {
 public:
  explicit SphereQuadrature(int n_theta = 64, int n_phi = 128);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  /// Total polynomial degree integrated exactly.
  int degree() const;

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // Folded rule: squared coordinates of the first-octant nodes and weights
  // already multiplied by eight.
  const std::vector<double>& octant_x2() const { return ox2_; }
  const std::vector<double>& octant_y2() const { return oy2_; }
  const std::vector<double>& octant_z2() const { return oz2_; }
  const std::vector<double>& octant_weights() const { return ow_; }

  /// Shared 64 x 128 rule (degree 127).
  static const SphereQuadrature& standard();
  /// Smallest foldable rule of at least the given degree. Throws
  /// std::invalid_argument for degree < 3.
  static SphereQuadrature with_degree(int degree);

 private:
  int n_theta_;
  int n_phi_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
  std::vector<double> ox2_, oy2_, oz2_, ow_;
};

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace chol
