#include "cholesteric/qtensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace chol {

const std::array<Mat3, 5>& basis() {
  static const std::array<Mat3, 5> b = [] {
    std::array<Mat3, 5> e;
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r6 = 1.0 / std::sqrt(6.0);
    for (auto& m : e) m.setZero();
    e[0](0, 0) = r2;
    e[0](1, 1) = -r2;
    e[1](0, 1) = e[1](1, 0) = r2;
    e[2](0, 2) = e[2](2, 0) = r2;
    e[3](1, 2) = e[3](2, 1) = r2;
    e[4](0, 0) = e[4](1, 1) = -r6;
    e[4](2, 2) = 2.0 * r6;
    return e;
  }();
  return b;
}

QTensor QTensor::from_matrix(const Mat3& m) {
  const Mat3 sym = 0.5 * (m + m.transpose());
  const auto& e = basis();
  Vec5 c;
  for (int i = 0; i < 5; ++i) c[i] = (sym.array() * e[i].array()).sum();
  return QTensor(c);
}

Mat3 QTensor::matrix() const {
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r6 = 1.0 / std::sqrt(6.0);
  Mat3 m;
  m(0, 0) = r2 * c_[0] - r6 * c_[4];
  m(1, 1) = -r2 * c_[0] - r6 * c_[4];
  m(2, 2) = 2.0 * r6 * c_[4];
  m(0, 1) = m(1, 0) = r2 * c_[1];
  m(0, 2) = m(2, 0) = r2 * c_[2];
  m(1, 2) = m(2, 1) = r2 * c_[3];
  return m;
}

std::array<std::uint8_t, 40> QTensor::to_bytes() const {
  std::array<std::uint8_t, 40> out{};
  for (int i = 0; i < 5; ++i) {
    auto bits = std::bit_cast<std::uint64_t>(c_[i]);
    for (int b = 0; b < 8; ++b) out[8 * i + b] = static_cast<std::uint8_t>(bits >> (8 * b));
  }
  return out;
}

QTensor QTensor::from_bytes(const std::array<std::uint8_t, 40>& bytes) {
  Vec5 c;
  for (int i = 0; i < 5; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(bytes[8 * i + b]) << (8 * b);
    c[i] = std::bit_cast<double>(bits);
  }
  return QTensor(c);
}

QTensor sigma(const Vec3& p) {
  const double len = p.norm();
  if (!(std::abs(len - 1.0) <= 1e-12)) {
    throw std::invalid_argument("sigma: direction is not a unit vector (|p| = " +
                                std::to_string(len) + ")");
  }
  const Vec3 u = p / len;
  return QTensor::from_matrix(u * u.transpose() - Mat3::Identity() / 3.0);
}

QTensor uniaxial(double s, const Vec3& n) { return s * sigma(n.normalized()); }

Eigensystem eigendecompose(const QTensor& q) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(q.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

bool is_physical(const QTensor& q, double margin) {
  const double lmin = eigendecompose(q).values[0];
  return lmin > -1.0 / 3.0 + margin;
}

UniaxialState uniaxial_project(const QTensor& q, double biaxial_threshold) {
  if (!(q.norm() > 0.0)) throw std::domain_error("uniaxial_project: Q = 0 has no director");
  const Eigensystem es = eigendecompose(q);
  const Vec3& l = es.values;
  const int k = (l[2] - l[1] >= l[1] - l[0]) ? 2 : 0;

  UniaxialState u;
  u.n = es.vectors.col(k).normalized();
  int big = 0;
  u.n.cwiseAbs().maxCoeff(&big);
  if (u.n[big] < 0) u.n = -u.n;
  u.s = 1.5 * q.dot(sigma(u.n));
  u.biaxiality = (q - u.s * sigma(u.n)).norm();
  u.biaxial = u.biaxiality > biaxial_threshold;
  return u;
}

Mat3 SkewMap::matrix() const {
  Mat3 w;
  w << 0, -z[2], z[1],
       z[2], 0, -z[0],
       -z[1], z[0], 0;
  return w;
}

Mat5 rotation_rep(const Mat3& r) {
  return operator_matrix([&](const Mat3& a) -> Mat3 { return r * a * r.transpose(); });
}

}  // namespace chol
