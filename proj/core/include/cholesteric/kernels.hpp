#pragma once

#include <array>
#include <string>
#include <vector>

#include "cholesteric/bulk.hpp"
#include "cholesteric/qtensor.hpp"
#include "cholesteric/radial.hpp"

namespace chol {

/// k1 A + k2 (Az(x)z + z(x)Az) + k3 (Az.z) z(x)z, made traceless.
struct AchiralKernel {
  RadialProfile k1, k2, k3;
  bool is_zero() const { return k1.is_zero() && k2.is_zero() && k3.is_zero(); }
  AchiralKernel scaled(double c) const { return {k1.scaled(c), k2.scaled(c), k3.scaled(c)}; }
};

/// (1/2) f1 (AW - WA) - (1/2) f2 (W A W^2 - W^2 A W), with W x = z cross x.
struct ChiralKernel {
  RadialProfile f1, f2;
  bool is_zero() const { return f1.is_zero() && f2.is_zero(); }
  ChiralKernel scaled(double c) const { return {f1.scaled(c), f2.scaled(c)}; }
};

struct KernelSet {
  AchiralKernel HH, HD, DD;
  ChiralKernel cH, cD;
  RadialProfile envelope;  // the g of the interaction bounds

  /// Rescales HH and HD so that 1/k0_HH = tau and k0_HD / k0_HH = alpha.
  KernelSet rescaled_to(double tau, double alpha) const;
  /// Same set with both chiral kernels negated.
  KernelSet mirrored() const;
  /// Gaussian demo set used by the CLI defaults and the acceptance suite.
  static KernelSet demo();
};

/// Default dilution coefficient paired with KernelSet::demo().
inline constexpr double kDemoRho0 = 0.2;

QTensor apply_achiral(const AchiralKernel& k, const Vec3& z, const QTensor& A);
QTensor apply_chiral(const ChiralKernel& k, const Vec3& z, const QTensor& A);

/// Angular factors. A kernel is a sum of profile(r) * r^degree * generator(z/r).
enum class Generator { Identity, Achiral2, Achiral4, Chiral1, Chiral3 };
int generator_degree(Generator g);
Mat5 generator_matrix(Generator g, const Vec3& omega);

struct KernelTerm {
  RadialProfile profile;
  Generator gen;
};

/// Operator-valued kernel z -> K(z) on the coefficient space.
class OperatorKernel {
 public:
  OperatorKernel() = default;
  explicit OperatorKernel(const AchiralKernel& k);
  explicit OperatorKernel(const ChiralKernel& k);

  const std::vector<KernelTerm>& terms() const { return terms_; }
  Mat5 at(const Vec3& z) const;
  bool is_zero() const { return terms_.empty(); }
  bool odd() const { return odd_; }
  double cutoff() const;

 private:
  std::vector<KernelTerm> terms_;
  bool odd_ = false;
};

using Gradient = std::array<QTensor, 3>;  // dQ/dx_alpha
using MomentVector = std::array<Mat5, 3>;
using MomentMatrix = std::array<std::array<Mat5, 3>, 3>;

/// Integral of K(z) over R^3.
Mat5 moment0(const OperatorKernel& k);
/// Integrals of K(z) z_alpha.
MomentVector moment1(const OperatorKernel& k);
/// Integrals of K(z) z_alpha z_beta.
MomentMatrix moment2(const OperatorKernel& k);

struct K0Result {
  double value = 0.0;       // scalar multiple of the identity
  double anisotropy = 0.0;  // Frobenius distance of the moment from value * Id
};

/// Throws std::logic_error when the anisotropy exceeds 1e-8 |value|.
K0Result k0(const AchiralKernel& k);

/// L(G, G') = (1/2) sum_ab G_a . M_ab G'_b with M_ab the second moment of K_HH.
class ElasticTensor {
 public:
  explicit ElasticTensor(const AchiralKernel& k) : m_(moment2(OperatorKernel(k))) {}
  double bilinear(const Gradient& g, const Gradient& h) const;
  /// (1/2) L(G, G): the elastic energy density.
  double energy_density(const Gradient& g) const { return 0.5 * bilinear(g, g); }
  const Mat5& block(int a, int b) const { return m_[a][b]; }

 private:
  MomentMatrix m_;
};

ElasticTensor elastic_tensor_L(const AchiralKernel& k);

/// V(Q, G) = sum_a (V_a Q) . G_a with V_a the first moment of K_cH.
class ChiralVector {
 public:
  explicit ChiralVector(const ChiralKernel& k) : v_(moment1(OperatorKernel(k))) {}
  double operator()(const QTensor& Q, const Gradient& g) const;
  const Mat5& component(int a) const { return v_[a]; }

 private:
  MomentVector v_;
};

ChiralVector chiral_vector_V(const ChiralKernel& k);

/// (4 pi / 3) * integral of [f1 r^4 + (1/5) f2 r^6 - f2 r^6] dr.
double beta_coefficient(const ChiralKernel& k);

/// beta read off V on the helix n = (cos m x3, sin m x3, 0) at x3 = 0,
/// where V = -beta s0^2 m.
double beta_from_helical_probe(const ChiralVector& v);

struct FrankConstants {
  double K11 = 0.0, K22 = 0.0, K33 = 0.0;
};

/// Splay, twist and bend probes around n = e3. Throws std::logic_error if the
/// probe energies fail the amplitude-doubling check.
FrankConstants frank_constants(const AchiralKernel& k, double s0);

struct AssumptionReport {
  double C1 = 0.0;        // min over samples and XY of lambda_min(K_XY(z)) / g(z)
  double C2 = 0.0;        // max of lambda_max(K_XY(z)) / g(z)
  double C_chiral = 0.0;  // max of |K_cX(z)|_op / g(z)
  double g_min = 0.0;
  int samples = 0;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

/// Samples the pointwise bounds on a radial grid times a fixed direction set.
AssumptionReport validate_assumptions(const KernelSet& ks, int radial_samples = 64, double cap = 1e2);

/// tau, alpha and kDD0 implied by the kernels' zeroth moments.
ModelParams derive_params(const KernelSet& ks, double rho0, double eps);

/// q = sc beta rho0 / (s0 K22). Throws std::domain_error unless K22 > 0 and s0 > 0.
double wavenumber_q(const KernelSet& ks, const ModelParams& p, double s0, double sc);

struct HostUnits {
  double rho_H = 1.0;
  double kB_T = 1.0;
};

struct HtpPhysical {
  double h = 0.0;
  double h_tilde = 0.0;
  double beta_tilde = 0.0;
  double K22_tilde = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  double s0 = 0.0;
  double sc = 0.0;
};

/// h = sc beta~ / (rho_H s0 K22~) from dimensional kernels; the dimensionless
/// kernels are rho_H / kB_T times the dimensional ones. Throws
/// std::domain_error in the isotropic phase.
HtpPhysical htp_physical(const KernelSet& dimensional, const HostUnits& host);

}  // namespace chol
