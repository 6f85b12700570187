#pragma once

#include "cholesteric/qtensor.hpp"
#include "cholesteric/sphere_quadrature.hpp"

namespace chol {

/// Largest Frobenius norm of a conjugate field accepted by the sphere rule.
inline constexpr double kLambdaCap = 200.0;

struct PotentialEval {
  QTensor Q;
  QTensor Lambda;     // conjugate field, the gradient of psi_s at Q
  double logZ = 0.0;  // ln of the integral of exp(Lambda p.p) over the sphere
  double psi = 0.0;   // Lambda.Q - logZ
  int iterations = 0;
};

/// Z^-1 * integral of sigma(p) exp(A p.p) dp. Throws std::range_error when
/// |A| exceeds kLambdaCap.
QTensor inverse_lambda(const QTensor& A, const SphereQuadrature& quad = SphereQuadrature::standard());

/// ln of the unnormalized sphere integral of exp(A p.p).
double log_partition(const QTensor& A, const SphereQuadrature& quad = SphereQuadrature::standard());

/// Same integrals on the full (unfolded) node set, without diagonalizing A.
/// Used to audit the folded evaluation.
QTensor inverse_lambda_full(const QTensor& A, const SphereQuadrature& quad = SphereQuadrature::standard());

/// Solves inverse_lambda(Lambda) = Q by damped Newton in the eigenframe of Q.
/// `warm` seeds the iteration (default 5Q). Throws std::domain_error unless
/// is_physical(Q, 1e-6), ConvergenceError after 50 iterations.
PotentialEval evaluate_potential(const QTensor& Q,
                                 const SphereQuadrature& quad = SphereQuadrature::standard(),
                                 const QTensor* warm = nullptr);

QTensor lambda_of(const QTensor& Q, const SphereQuadrature& quad = SphereQuadrature::standard());

/// Singular potential with the unnormalized measure, so psi_s(0) = -ln(4 pi).
double psi_s(const QTensor& Q, const SphereQuadrature& quad = SphereQuadrature::standard());

// Uniaxial reductions. For A = mu * sigma(n) the integrals collapse to one
// dimension in x = n.p with weight exp(mu (x^2 - 1/3)).

/// ln of 2 pi * integral over [-1, 1] of exp(mu (x^2 - 1/3)).
double log_z_uniaxial(double mu);

/// Scalar order parameter of inverse_lambda(mu sigma(n)).
double s_of_mu(double mu);

/// d s / d mu.
double ds_dmu(double mu);

/// lambda(s) = (3/2) Lambda(s sigma(n)) . sigma(n); inverse of s_of_mu.
/// Throws std::domain_error outside (-1/2, 1).
double lambda_scalar(double s);

/// psi_s(s sigma(n)) through the one-dimensional reduction.
double psi_uniaxial(double s);

/// Order parameter of the dopant equilibrium against a host with order s0 at
/// coupling kHD: the Legendre-weighted average with exponent kHD*s0*(x^2 - 1/3).
double sc_from(double s0, double kHD);

}  // namespace chol
