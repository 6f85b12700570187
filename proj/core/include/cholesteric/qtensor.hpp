#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace chol {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Orthonormal basis of the traceless symmetric 3x3 matrices (Frobenius
/// inner product), in coefficient order:
///   E0 = (e1e1 - e2e2)/sqrt2
///   E1 = (e1e2 + e2e1)/sqrt2
///   E2 = (e1e3 + e3e1)/sqrt2
///   E3 = (e2e3 + e3e2)/sqrt2
///   E4 = (2 e3e3 - e1e1 - e2e2)/sqrt6
const std::array<Mat3, 5>& basis();

/// Traceless symmetric tensor stored as its five basis coefficients.
class QTensor {
 public:
  QTensor() : c_(Vec5::Zero()) {}
  explicit QTensor(const Vec5& c) : c_(c) {}

  /// Projects an arbitrary 3x3 matrix onto the traceless symmetric subspace.
  static QTensor from_matrix(const Mat3& m);
  static QTensor zero() { return QTensor(); }

  const Vec5& coeffs() const { return c_; }
  double operator[](int i) const { return c_[i]; }
  Mat3 matrix() const;

  double norm() const { return c_.norm(); }
  double dot(const QTensor& o) const { return c_.dot(o.c_); }

  QTensor operator+(const QTensor& o) const { return QTensor(c_ + o.c_); }
  QTensor operator-(const QTensor& o) const { return QTensor(c_ - o.c_); }
  QTensor operator-() const { return QTensor(-c_); }
  QTensor operator*(double a) const { return QTensor(a * c_); }
  friend QTensor operator*(double a, const QTensor& q) { return q * a; }

  /// 5 little-endian float64 values in basis order.
  std::array<std::uint8_t, 40> to_bytes() const;
  static QTensor from_bytes(const std::array<std::uint8_t, 40>& bytes);

 private:
  Vec5 c_;
};

/// sigma(p) = p (x) p - I/3. Inputs within 1e-12 of unit length are
/// normalized; anything else throws std::invalid_argument.
QTensor sigma(const Vec3& p);

/// s * sigma(n).
QTensor uniaxial(double s, const Vec3& n);

struct Eigensystem {
  Vec3 values;   // ascending
  Mat3 vectors;  // columns, orthonormal
};

Eigensystem eigendecompose(const QTensor& q);

/// True iff the smallest eigenvalue exceeds -1/3 + margin.
bool is_physical(const QTensor& q, double margin = 0.0);

/// Admissible scalar order parameters of uniaxial states: (-1/2, 1).
inline constexpr double kScalarMin = -0.5;
inline constexpr double kScalarMax = 1.0;

struct UniaxialState {
  double s = 0.0;
  Vec3 n = Vec3::UnitZ();
  double biaxiality = 0.0;  // Frobenius distance from Q to s*sigma(n)
  bool biaxial = false;     // biaxiality above the requested threshold
};

/// Director and scalar order parameter of the distinguished eigenvalue (the
/// one farthest from the median; ties go to the largest). Throws
/// std::domain_error for Q = 0. The returned n has its largest-magnitude
/// component positive.
UniaxialState uniaxial_project(const QTensor& q, double biaxial_threshold = 1e-8);

/// W with W x = z cross x.
struct SkewMap {
  Vec3 z = Vec3::Zero();
  Mat3 matrix() const;
  Vec3 apply(const Vec3& x) const { return z.cross(x); }
};

/// Action of a rotation on basis coefficients: coeffs(R Q R^T) = B * coeffs(Q).
Mat5 rotation_rep(const Mat3& r);

/// Matrix of a linear map on traceless symmetric matrices in the basis.
template <class F>
Mat5 operator_matrix(F&& apply) {
  Mat5 m;
  const auto& e = basis();
  for (int j = 0; j < 5; ++j) m.col(j) = QTensor::from_matrix(apply(e[j])).coeffs();
  return m;
}

}  // namespace chol
