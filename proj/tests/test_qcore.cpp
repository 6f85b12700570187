#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cholesteric/grid.hpp"
#include "cholesteric/qtensor.hpp"
#include "cholesteric/sphere_quadrature.hpp"

using namespace chol;

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

QTensor random_q(std::mt19937_64& rng, double scale = 0.2) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec5 c;
  for (int i = 0; i < 5; ++i) c[i] = u(rng);
  return QTensor(c);
}

}  // namespace

TEST(Basis, Orthonormal) {
  const auto& e = basis();
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(e[i].trace(), 0.0, 1e-15);
    EXPECT_NEAR((e[i] - e[i].transpose()).norm(), 0.0, 1e-15);
    for (int j = 0; j < 5; ++j)
      EXPECT_NEAR((e[i].cwiseProduct(e[j])).sum(), i == j ? 1.0 : 0.0, 1e-15);
  }
}

TEST(QTensor, MatrixRoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const QTensor q = random_q(rng);
    EXPECT_NEAR((QTensor::from_matrix(q.matrix()) - q).norm(), 0.0, 1e-15);
    EXPECT_NEAR(q.matrix().squaredNorm(), q.coeffs().squaredNorm(), 1e-15);
  }
}

TEST(QTensor, FromMatrixDropsTraceAndAntisymmetry) {
  Mat3 m;
  m << 1, 2, 3, 0, 5, 6, 1, 1, 9;
  const Mat3 p = QTensor::from_matrix(m).matrix();
  const Mat3 sym = 0.5 * (m + m.transpose());
  EXPECT_NEAR((p - (sym - sym.trace() / 3.0 * Mat3::Identity())).norm(), 0.0, 1e-14);
}

TEST(QTensor, ByteRoundTripIsExact) {
  std::mt19937_64 rng(5);
  const QTensor q = random_q(rng);
  const auto bytes = q.to_bytes();
  EXPECT_EQ(QTensor::from_bytes(bytes).coeffs(), q.coeffs());
  // little-endian: the lowest byte of the first coefficient comes first
  double first;
  std::memcpy(&first, bytes.data(), 8);
  EXPECT_EQ(first, q[0]);
}

TEST(Sigma, TracelessAndNormalized) {
  const QTensor s = sigma(Vec3(1.0 + 1e-13, 0.0, 0.0));
  EXPECT_NEAR(s.matrix()(0, 0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.norm(), std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_THROW(sigma(Vec3(2.0, 0.0, 0.0)), std::invalid_argument);
  EXPECT_THROW(sigma(Vec3::Zero()), std::invalid_argument);
}

TEST(Physicality, BoundaryOfUniaxialRay) {
  const Vec3 n = Vec3::UnitZ();
  EXPECT_TRUE(is_physical(uniaxial(0.99, n)));
  EXPECT_FALSE(is_physical(uniaxial(1.0, n)));
  EXPECT_TRUE(is_physical(uniaxial(-0.49, n)));
  EXPECT_FALSE(is_physical(uniaxial(-0.5, n)));
  EXPECT_FALSE(is_physical(uniaxial(0.95, n), 0.1));
}

TEST(Eigen, RotationCovariance) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const QTensor q = random_q(rng);
    const Mat3 r = random_rotation(rng);
    const Eigensystem a = eigendecompose(q);
    const Eigensystem b = eigendecompose(QTensor::from_matrix(r * q.matrix() * r.transpose()));
    EXPECT_NEAR((a.values - b.values).norm(), 0.0, 1e-13);
    const Vec5 rep = rotation_rep(r) * q.coeffs();
    EXPECT_NEAR((rep - QTensor::from_matrix(r * q.matrix() * r.transpose()).coeffs()).norm(), 0.0, 1e-14);
  }
}

TEST(UniaxialProject, RecoversUniaxialState) {
  const Vec3 n = Vec3(1.0, 2.0, -0.5).normalized();
  const UniaxialState u = uniaxial_project(uniaxial(0.6, n));
  EXPECT_NEAR(u.s, 0.6, 1e-13);
  EXPECT_NEAR(std::abs(u.n.dot(n)), 1.0, 1e-13);
  EXPECT_FALSE(u.biaxial);
  EXPECT_NEAR(u.biaxiality, 0.0, 1e-13);
}

TEST(UniaxialProject, NegativeOrderPicksDistinguishedAxis) {
  const UniaxialState u = uniaxial_project(uniaxial(-0.3, Vec3::UnitY()));
  EXPECT_NEAR(u.s, -0.3, 1e-13);
  EXPECT_NEAR(u.n.y(), 1.0, 1e-13);  // sign convention: largest component positive
}

TEST(UniaxialProject, SmallBiaxialPerturbation) {
  Mat3 m = 0.5 * (Vec3::UnitX() * Vec3::UnitX().transpose()) - Mat3::Identity() / 6.0;
  m(1, 1) += 1e-6;
  m(2, 2) -= 1e-6;
  const UniaxialState u = uniaxial_project(QTensor::from_matrix(m));
  EXPECT_NEAR(u.s, 0.5, 1e-12);
  EXPECT_NEAR(std::abs(u.n.x()), 1.0, 1e-12);
  EXPECT_TRUE(u.biaxial);
  EXPECT_NEAR(u.biaxiality, std::sqrt(2.0) * 1e-6, 1e-9);
}

TEST(UniaxialProject, ZeroThrows) { EXPECT_THROW(uniaxial_project(QTensor::zero()), std::domain_error); }

TEST(SkewMap, MatchesCrossProduct) {
  SkewMap w{Vec3(0.3, -1.0, 2.0)};
  const Vec3 x(1.0, 0.5, -0.25);
  EXPECT_NEAR((w.matrix() * x - w.apply(x)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((w.matrix() + w.matrix().transpose()).norm(), 0.0, 1e-15);
}

TEST(SphereQuadrature, Moments) {
  const auto& q = SphereQuadrature::standard();
  double w = 0, x2 = 0, x2y2 = 0, x4 = 0;
  for (std::size_t i = 0; i < q.nodes().size(); ++i) {
    const Vec3& p = q.nodes()[i];
    w += q.weights()[i];
    x2 += q.weights()[i] * p.x() * p.x();
    x2y2 += q.weights()[i] * p.x() * p.x() * p.y() * p.y();
    x4 += q.weights()[i] * std::pow(p.z(), 4);
  }
  const double pi = std::numbers::pi;
  EXPECT_NEAR(w, 4 * pi, 1e-13);
  EXPECT_NEAR(x2, 4 * pi / 3, 1e-13);
  EXPECT_NEAR(x2y2, 4 * pi / 15, 1e-13);
  EXPECT_NEAR(x4, 4 * pi / 5, 1e-13);
}

TEST(SphereQuadrature, OctantFoldMatchesFullRule) {
  const auto& q = SphereQuadrature::standard();
  auto f = [](double a, double b, double c) { return std::exp(1.3 * a - 0.7 * b + 0.2 * c * c); };
  double full = 0, fold = 0;
  for (std::size_t i = 0; i < q.nodes().size(); ++i) {
    const Vec3& p = q.nodes()[i];
    full += q.weights()[i] * f(p.x() * p.x(), p.y() * p.y(), p.z() * p.z());
  }
  for (std::size_t i = 0; i < q.octant_weights().size(); ++i)
    fold += q.octant_weights()[i] * f(q.octant_x2()[i], q.octant_y2()[i], q.octant_z2()[i]);
  EXPECT_NEAR(fold, full, 1e-12 * std::abs(full));
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(6, -1.0, 2.0, x, w);
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 11);
  EXPECT_NEAR(s, (std::pow(2.0, 12) - 1.0) / 12.0, 1e-11);
}

TEST(TorusGrid, IndexingAndWrap) {
  const TorusGrid g(4, 6, 8);
  EXPECT_EQ(g.size(), 192u);
  const std::size_t i = g.index(3, 5, 7);
  EXPECT_EQ(g.coords(i), (std::array<int, 3>{3, 5, 7}));
  EXPECT_EQ(g.shifted(i, 1, 1, 1), g.index(0, 0, 0));
  EXPECT_EQ(g.shifted(g.index(0, 0, 0), -1, 0, -9), g.index(3, 0, 7));
  EXPECT_NEAR(g.cell_volume() * g.size(), std::pow(2 * std::numbers::pi, 3), 1e-10);
  EXPECT_THROW(TorusGrid(3, 4, 4), std::invalid_argument);
  EXPECT_THROW(TorusGrid(2, 4, 4), std::invalid_argument);
}

TEST(QField, ShiftAndNorm) {
  const TorusGrid g = TorusGrid::thin(8);
  QField f(g);
  f.Q[g.index(0, 0, 0)] = uniaxial(0.5, Vec3::UnitX());
  const QField s = f.shifted(0, 0, 3);
  EXPECT_NEAR(s.Q[g.index(0, 0, 3)].norm(), f.Q[g.index(0, 0, 0)].norm(), 0.0);
  const double h3 = g.cell_volume();
  EXPECT_NEAR(grid_l2(g, f.Q), std::sqrt(h3) * f.Q[0].norm(), 1e-15);
  EXPECT_TRUE(f.physical());
}

TEST(SphereQuadrature, WithDegree) {
  const SphereQuadrature s = SphereQuadrature::with_degree(127);
  EXPECT_EQ(s.n_theta(), SphereQuadrature::standard().n_theta());
  EXPECT_EQ(s.n_phi(), SphereQuadrature::standard().n_phi());
  for (int d : {3, 7, 20, 63, 100}) {
    const SphereQuadrature q = SphereQuadrature::with_degree(d);
    EXPECT_GE(q.degree(), d) << d;
    EXPECT_LT(q.degree(), d + 8) << d;
  }
  EXPECT_THROW(SphereQuadrature::with_degree(2), std::invalid_argument);
}
