#include "cholesteric/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "cholesteric/errors.hpp"

namespace chol {
namespace {

constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonMaxIter = 50;
// Rounding floor of the quadrature moments at large |Lambda|.
constexpr double kNewtonFloor = 1e-8;
constexpr double kUniaxialCap = 1e5;
// The absolute tolerance halves per level, so depth bounds the work when
// rounding keeps the local error above it.
constexpr unsigned kGkDepth = 10;
constexpr double kGkTol = 1e-14;

// Moments of a diagonal exponent exp(l0 x^2 + l1 y^2 + l2 z^2) on the folded rule.
struct DiagMoments {
  double logZ;
  Vec3 m;  // <p_i^2>
  Mat3 c;  // covariance of p_i^2
};

DiagMoments diag_moments(const Vec3& l, const SphereQuadrature& q, bool need_cov) {
  const auto& x2 = q.octant_x2();
  const auto& y2 = q.octant_y2();
  const auto& z2 = q.octant_z2();
  const auto& w = q.octant_weights();
  const size_t n = w.size();

  double emax = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < n; ++k) emax = std::max(emax, l[0] * x2[k] + l[1] * y2[k] + l[2] * z2[k]);

  double z = 0, mx = 0, my = 0, mz = 0;
  double cxx = 0, cyy = 0, czz = 0, cxy = 0, cxz = 0, cyz = 0;
  for (size_t k = 0; k < n; ++k) {
    const double f = w[k] * std::exp(l[0] * x2[k] + l[1] * y2[k] + l[2] * z2[k] - emax);
    z += f;
    mx += f * x2[k];
    my += f * y2[k];
    mz += f * z2[k];
    if (need_cov) {
      cxx += f * x2[k] * x2[k];
      cyy += f * y2[k] * y2[k];
      czz += f * z2[k] * z2[k];
      cxy += f * x2[k] * y2[k];
      cxz += f * x2[k] * z2[k];
      cyz += f * y2[k] * z2[k];
    }
  }
  DiagMoments out;
  out.logZ = std::log(z) + emax;
  out.m = Vec3(mx, my, mz) / z;
  if (need_cov) {
    Mat3 s;
    s << cxx, cxy, cxz, cxy, cyy, cyz, cxz, cyz, czz;
    out.c = s / z - out.m * out.m.transpose();
  }
  return out;
}

void check_cap(const QTensor& A) {
  if (A.norm() > kLambdaCap) {
    throw std::range_error("conjugate field norm " + std::to_string(A.norm()) +
                           " exceeds the quadrature cap " + std::to_string(kLambdaCap));
  }
}

QTensor from_eigen(const Mat3& r, const Vec3& d) {
  return QTensor::from_matrix(r * d.asDiagonal() * r.transpose());
}

}  // namespace

QTensor inverse_lambda(const QTensor& A, const SphereQuadrature& quad) {
  check_cap(A);
  const Eigensystem es = eigendecompose(A);
  const DiagMoments dm = diag_moments(es.values, quad, false);
  return from_eigen(es.vectors, dm.m - Vec3::Constant(1.0 / 3.0));
}

double log_partition(const QTensor& A, const SphereQuadrature& quad) {
  check_cap(A);
  return diag_moments(eigendecompose(A).values, quad, false).logZ;
}

QTensor inverse_lambda_full(const QTensor& A, const SphereQuadrature& quad) {
  check_cap(A);
  const Mat3 a = A.matrix();
  const auto& p = quad.nodes();
  const auto& w = quad.weights();
  double emax = -std::numeric_limits<double>::infinity();
  for (const auto& v : p) emax = std::max(emax, v.dot(a * v));
  double z = 0;
  Mat3 m = Mat3::Zero();
  for (size_t k = 0; k < p.size(); ++k) {
    const double f = w[k] * std::exp(p[k].dot(a * p[k]) - emax);
    z += f;
    m += f * p[k] * p[k].transpose();
  }
  return QTensor::from_matrix(m / z);
}

PotentialEval evaluate_potential(const QTensor& Q, const SphereQuadrature& quad, const QTensor* warm) {
  if (!is_physical(Q, 1e-6)) {
    throw std::domain_error("lambda_of: Q is outside the physical set (lambda_min <= -1/3 + 1e-6)");
  }
  const Eigensystem es = eigendecompose(Q);
  const Vec3 target = es.values + Vec3::Constant(1.0 / 3.0);

  // Traceless coordinates: l = U a with U orthonormal and orthogonal to (1,1,1).
  Eigen::Matrix<double, 3, 2> U;
  U << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
       -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
       0.0, -2.0 / std::sqrt(6.0);

  Vec3 l;
  if (warm) {
    const Mat3 lw = es.vectors.transpose() * warm->matrix() * es.vectors;
    l = lw.diagonal();
  } else {
    l = 5.0 * es.values;
  }
  l -= Vec3::Constant(l.sum() / 3.0);

  // Convex dual: f(l) = logZ(l) - l.target, gradient m - target.
  auto dual = [&](const DiagMoments& d, const Vec3& ll) { return d.logZ - ll.dot(target); };

  DiagMoments d = diag_moments(l, quad, true);
  double f = dual(d, l);
  Vec3 r = d.m - target;
  int it = 0;
  for (; r.norm() >= kNewtonTol; ++it) {
    if (it >= kNewtonMaxIter) throw ConvergenceError("lambda_of: Newton did not converge", r.norm(), it);
    const Eigen::Vector2d g = U.transpose() * r;
    const Eigen::Matrix2d H = U.transpose() * d.c * U;
    const Eigen::Vector2d step = -H.ldlt().solve(g);
    const Vec3 dl = U * step;
    double t = 1.0;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Vec3 trial = l + t * dl;
      if (trial.norm() > 2.0 * kLambdaCap) {
        if (l.norm() > kLambdaCap) throw std::range_error("lambda_of: conjugate field exceeds the quadrature cap");
        continue;
      }
      const DiagMoments dt = diag_moments(trial, quad, true);
      const double ft = dual(dt, trial);
      if (ft <= f + 1e-4 * t * r.dot(dl) || (r.norm() < 1e-6 && ft <= f + 1e-14 * std::abs(f))) {
        l = trial;
        d = dt;
        f = ft;
        break;
      }
    }
    if (t < 1e-17) throw ConvergenceError("lambda_of: line search failed", r.norm(), it);
    const double prev = r.norm();
    r = d.m - target;
    if (r.norm() < kNewtonFloor && r.norm() >= prev) break;
  }
  if (l.norm() > kLambdaCap) {
    throw std::range_error("lambda_of: conjugate field exceeds the quadrature cap");
  }

  PotentialEval out;
  out.Q = Q;
  out.Lambda = from_eigen(es.vectors, l);
  out.logZ = d.logZ;
  out.psi = l.dot(es.values) - d.logZ;
  out.iterations = it;
  return out;
}

QTensor lambda_of(const QTensor& Q, const SphereQuadrature& quad) {
  return evaluate_potential(Q, quad).Lambda;
}

double psi_s(const QTensor& Q, const SphereQuadrature& quad) { return evaluate_potential(Q, quad).psi; }

// ---------------------------------------------------------------------------
// One-dimensional reductions.

namespace {

struct UniMoments {
  double log_j;  // ln of integral over [0,1] of exp(mu x^2 - shift)
  double shift;
  double m2, m4;
};

UniMoments uni_moments(double mu) {
  if (!(std::abs(mu) <= kUniaxialCap)) {
    throw std::range_error("uniaxial reduction: |mu| = " + std::to_string(mu) + " exceeds cap");
  }
  using boost::math::quadrature::gauss_kronrod;
  const double shift = mu > 0 ? mu : 0.0;
  auto w = [&](double x) { return std::exp(mu * x * x - shift); };
  const double tol = kGkTol;
  const unsigned depth = kGkDepth;
  const double j0 = gauss_kronrod<double, 61>::integrate(w, 0.0, 1.0, depth, tol);
  const double j2 = gauss_kronrod<double, 61>::integrate([&](double x) { return x * x * w(x); }, 0.0, 1.0, depth, tol);
  const double j4 = gauss_kronrod<double, 61>::integrate([&](double x) { return x * x * x * x * w(x); }, 0.0, 1.0, depth, tol);
  return {std::log(j0), shift, j2 / j0, j4 / j0};
}

}  // namespace

double log_z_uniaxial(double mu) {
  const UniMoments u = uni_moments(mu);
  return std::log(4.0 * std::numbers::pi) - mu / 3.0 + u.shift + u.log_j;
}

double s_of_mu(double mu) { return 1.5 * uni_moments(mu).m2 - 0.5; }

double ds_dmu(double mu) {
  const UniMoments u = uni_moments(mu);
  return 1.5 * (u.m4 - u.m2 * u.m2);
}

double lambda_scalar(double s) {
  if (!(s > kScalarMin && s < kScalarMax)) {
    throw std::domain_error("lambda_scalar: s = " + std::to_string(s) + " outside (-1/2, 1)");
  }
  if (s == 0.0) return 0.0;
  const double hi = std::max(2.0, 3.0 / (1.0 - s));
  const double lo = std::min(-2.0, -1.5 / (s + 0.5));
  auto f = [&](double mu) {
    const UniMoments u = uni_moments(mu);
    return std::make_pair(1.5 * u.m2 - 0.5 - s, 1.5 * (u.m4 - u.m2 * u.m2));
  };
  std::uintmax_t iters = 100;
  const double guess = std::clamp(s > 0 ? 1.5 * s / (1.0 - s) + 5.0 * s : 5.0 * s, lo, hi);
  const double mu = boost::math::tools::newton_raphson_iterate(
      f, guess, lo, hi, std::numeric_limits<double>::digits - 3, iters);
  if (iters >= 100) throw ConvergenceError("lambda_scalar: Newton did not converge", std::abs(f(mu).first), 100);
  return mu;
}

double psi_uniaxial(double s) {
  const double mu = lambda_scalar(s);
  return 2.0 / 3.0 * mu * s - log_z_uniaxial(mu);
}

double sc_from(double s0, double kHD) {
  if (!(s0 > kScalarMin && s0 < kScalarMax)) {
    throw std::domain_error("sc_from: s0 outside (-1/2, 1)");
  }
  const double mu = kHD * s0;
  if (!(std::abs(mu) <= kUniaxialCap)) throw std::range_error("sc_from: kHD*s0 exceeds cap");
  using boost::math::quadrature::gauss_kronrod;
  const double shift = mu > 0 ? mu : 0.0;
  auto w = [&](double x) { return std::exp(mu * x * x - shift); };
  auto p2w = [&](double x) { return 0.5 * (3.0 * x * x - 1.0) * w(x); };
  const double num = gauss_kronrod<double, 61>::integrate(p2w, 0.0, 1.0, kGkDepth, kGkTol);
  const double den = gauss_kronrod<double, 61>::integrate(w, 0.0, 1.0, kGkDepth, kGkTol);
  return num / den;
}

}  // namespace chol
