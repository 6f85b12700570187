#include "cholesteric/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cholesteric/entropy.hpp"
#include "cholesteric/sphere_quadrature.hpp"

namespace chol {
namespace {

// Exact for polynomials of degree 15 on the sphere; moments need at most 6.
const SphereQuadrature& angular_rule() {
  static const SphereQuadrature q(8, 16);
  return q;
}

}  // namespace

QTensor apply_achiral(const AchiralKernel& k, const Vec3& z, const QTensor& A) {
  const Mat3 a = A.matrix();
  const Vec3 az = a * z;
  const double azz = az.dot(z);
  const double r = z.norm();
  const double c1 = k.k1(r), c2 = k.k2(r), c3 = k.k3(r);
  const Mat3 out = c1 * a + c2 * (az * z.transpose() + z * az.transpose()) + c3 * azz * z * z.transpose() -
                   azz / 3.0 * (2.0 * c2 + c3 * z.squaredNorm()) * Mat3::Identity();
  return QTensor::from_matrix(out);
}

QTensor apply_chiral(const ChiralKernel& k, const Vec3& z, const QTensor& A) {
  const Mat3 a = A.matrix();
  const Mat3 w = SkewMap{z}.matrix();
  const double r = z.norm();
  const Mat3 w2 = w * w;
  const Mat3 out = 0.5 * k.f1(r) * (a * w - w * a) - 0.5 * k.f2(r) * (w * a * w2 - w2 * a * w);
  return QTensor::from_matrix(out);
}

int generator_degree(Generator g) {
  switch (g) {
    case Generator::Identity: return 0;
    case Generator::Chiral1: return 1;
    case Generator::Achiral2: return 2;
    case Generator::Chiral3: return 3;
    case Generator::Achiral4: return 4;
  }
  return 0;
}

Mat5 generator_matrix(Generator g, const Vec3& w) {
  switch (g) {
    case Generator::Identity:
      return Mat5::Identity();
    case Generator::Achiral2:
      return operator_matrix([&](const Mat3& a) -> Mat3 {
        const Vec3 aw = a * w;
        return aw * w.transpose() + w * aw.transpose() - 2.0 / 3.0 * aw.dot(w) * Mat3::Identity();
      });
    case Generator::Achiral4:
      return operator_matrix([&](const Mat3& a) -> Mat3 {
        return (a * w).dot(w) * (w * w.transpose() - Mat3::Identity() / 3.0);
      });
    case Generator::Chiral1: {
      const Mat3 W = SkewMap{w}.matrix();
      return operator_matrix([&](const Mat3& a) -> Mat3 { return 0.5 * (a * W - W * a); });
    }
    case Generator::Chiral3: {
      const Mat3 W = SkewMap{w}.matrix();
      const Mat3 W2 = W * W;
      return operator_matrix([&](const Mat3& a) -> Mat3 { return -0.5 * (W * a * W2 - W2 * a * W); });
    }
  }
  return Mat5::Zero();
}

OperatorKernel::OperatorKernel(const AchiralKernel& k) {
  if (!k.k1.is_zero()) terms_.push_back({k.k1, Generator::Identity});
  if (!k.k2.is_zero()) terms_.push_back({k.k2, Generator::Achiral2});
  if (!k.k3.is_zero()) terms_.push_back({k.k3, Generator::Achiral4});
}

OperatorKernel::OperatorKernel(const ChiralKernel& k) : odd_(true) {
  if (!k.f1.is_zero()) terms_.push_back({k.f1, Generator::Chiral1});
  if (!k.f2.is_zero()) terms_.push_back({k.f2, Generator::Chiral3});
}

Mat5 OperatorKernel::at(const Vec3& z) const {
  Mat5 m = Mat5::Zero();
  const double r = z.norm();
  if (r == 0.0) {
    for (const auto& t : terms_)
      if (t.gen == Generator::Identity) m += t.profile(0.0) * Mat5::Identity();
    return m;
  }
  const Vec3 w = z / r;
  for (const auto& t : terms_) {
    m += t.profile(r) * std::pow(r, generator_degree(t.gen)) * generator_matrix(t.gen, w);
  }
  return m;
}

double OperatorKernel::cutoff() const {
  double c = 0.0;
  for (const auto& t : terms_) c = std::max(c, t.profile.cutoff());
  return c;
}

Mat5 moment0(const OperatorKernel& k) {
  const auto& q = angular_rule();
  Mat5 m = Mat5::Zero();
  for (const auto& t : k.terms()) {
    Mat5 ang = Mat5::Zero();
    for (std::size_t i = 0; i < q.nodes().size(); ++i) ang += q.weights()[i] * generator_matrix(t.gen, q.nodes()[i]);
    m += t.profile.moment(generator_degree(t.gen) + 2) * ang;
  }
  return m;
}

MomentVector moment1(const OperatorKernel& k) {
  const auto& q = angular_rule();
  MomentVector m;
  for (auto& x : m) x.setZero();
  for (const auto& t : k.terms()) {
    const double rad = t.profile.moment(generator_degree(t.gen) + 3);
    for (std::size_t i = 0; i < q.nodes().size(); ++i) {
      const Vec3& w = q.nodes()[i];
      const Mat5 g = generator_matrix(t.gen, w);
      for (int a = 0; a < 3; ++a) m[a] += rad * q.weights()[i] * w[a] * g;
    }
  }
  return m;
}

MomentMatrix moment2(const OperatorKernel& k) {
  const auto& q = angular_rule();
  MomentMatrix m;
  for (auto& row : m)
    for (auto& x : row) x.setZero();
  for (const auto& t : k.terms()) {
    const double rad = t.profile.moment(generator_degree(t.gen) + 4);
    for (std::size_t i = 0; i < q.nodes().size(); ++i) {
      const Vec3& w = q.nodes()[i];
      const Mat5 g = generator_matrix(t.gen, w);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m[a][b] += rad * q.weights()[i] * w[a] * w[b] * g;
    }
  }
  return m;
}

K0Result k0(const AchiralKernel& k) {
  const Mat5 m = moment0(OperatorKernel(k));
  K0Result r;
  r.value = m.trace() / 5.0;
  r.anisotropy = (m - r.value * Mat5::Identity()).norm();
  if (r.anisotropy > 1e-8 * std::abs(r.value) && r.anisotropy > 1e-300) {
    throw std::logic_error("k0: zeroth moment is not a multiple of the identity (residual " +
                           std::to_string(r.anisotropy) + ")");
  }
  return r;
}

double ElasticTensor::bilinear(const Gradient& g, const Gradient& h) const {
  double s = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s += g[a].coeffs().dot(m_[a][b] * h[b].coeffs());
  return 0.5 * s;
}

ElasticTensor elastic_tensor_L(const AchiralKernel& k) { return ElasticTensor(k); }

double ChiralVector::operator()(const QTensor& Q, const Gradient& g) const {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) s += (v_[a] * Q.coeffs()).dot(g[a].coeffs());
  return s;
}

ChiralVector chiral_vector_V(const ChiralKernel& k) { return ChiralVector(k); }

double beta_coefficient(const ChiralKernel& k) {
  return 4.0 * std::numbers::pi / 3.0 * (k.f1.moment(4) + (0.2 - 1.0) * k.f2.moment(6));
}

double beta_from_helical_probe(const ChiralVector& v) {
  const double s0 = 1.0, m = 1.0;
  const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY();
  const QTensor Q = uniaxial(s0, e1);
  Gradient g{QTensor(), QTensor(), QTensor::from_matrix(s0 * m * (e1 * e2.transpose() + e2 * e1.transpose()))};
  return -v(Q, g) / (s0 * s0 * m);
}

FrankConstants frank_constants(const AchiralKernel& k, double s0) {
  if (!(s0 > 0.0)) throw std::domain_error("frank_constants: s0 must be positive");
  const ElasticTensor L(k);
  const Vec3 e1 = Vec3::UnitX(), e3 = Vec3::UnitZ();
  // Director n = e3 + a x_alpha e1 near the origin: splay (alpha=0), twist (1), bend (2).
  auto probe = [&](int alpha, double a) {
    Gradient g{QTensor(), QTensor(), QTensor()};
    g[alpha] = QTensor::from_matrix(s0 * a * (e1 * e3.transpose() + e3 * e1.transpose()));
    return L.energy_density(g);
  };
  std::array<double, 3> K{};
  const double a = 1e-2;
  for (int alpha = 0; alpha < 3; ++alpha) {
    const double e1v = probe(alpha, a), e2v = probe(alpha, 2 * a);
    const double denom = std::max(std::abs(e1v), 1e-300);
    if (std::abs(e2v - 4.0 * e1v) > 1e-6 * 4.0 * denom) {
      throw std::logic_error("frank_constants: probe energy is not quadratic in the amplitude");
    }
    K[alpha] = 2.0 * e1v / (s0 * s0 * a * a);
  }
  return {K[0], K[1], K[2]};
}

AssumptionReport validate_assumptions(const KernelSet& ks, int radial_samples, double cap) {
  AssumptionReport rep;
  const SphereQuadrature dirs(4, 8);
  const OperatorKernel sym[3] = {OperatorKernel(ks.HH), OperatorKernel(ks.HD), OperatorKernel(ks.DD)};
  const OperatorKernel chi[2] = {OperatorKernel(ks.cH), OperatorKernel(ks.cD)};
  const char* sym_names[3] = {"HH", "HD", "DD"};
  const char* chi_names[2] = {"cH", "cD"};

  if (ks.envelope.is_zero()) {
    rep.violations.push_back("envelope g is identically zero");
    return rep;
  }
  const double R = ks.envelope.cutoff();
  rep.C1 = std::numeric_limits<double>::infinity();
  rep.C2 = 0.0;
  rep.g_min = std::numeric_limits<double>::infinity();
  bool lower_ok[3] = {true, true, true};

  for (int i = 0; i < radial_samples; ++i) {
    const double r = R * (i + 0.5) / radial_samples;
    const double g = ks.envelope(r);
    rep.g_min = std::min(rep.g_min, g);
    for (const Vec3& w : dirs.nodes()) {
      const Vec3 z = r * w;
      ++rep.samples;
      for (int x = 0; x < 3; ++x) {
        const Mat5 m = sym[x].at(z);
        const Eigen::SelfAdjointEigenSolver<Mat5> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
        if (g <= 0.0) {
          if (es.eigenvalues().cwiseAbs().maxCoeff() > 0.0) {
            rep.violations.push_back(std::string(sym_names[x]) + " is nonzero where g vanishes");
          }
          continue;
        }
        const double lo = es.eigenvalues()[0] / g, hi = es.eigenvalues()[4] / g;
        rep.C1 = std::min(rep.C1, lo);
        rep.C2 = std::max(rep.C2, hi);
        if (lo <= 0.0) lower_ok[x] = false;
      }
      for (int c = 0; c < 2; ++c) {
        if (chi[c].is_zero()) continue;
        const double nrm = Eigen::JacobiSVD<Mat5>(chi[c].at(z)).singularValues()[0];
        if (g <= 0.0) {
          if (nrm > 0.0) rep.violations.push_back(std::string(chi_names[c]) + " is nonzero where g vanishes");
          continue;
        }
        rep.C_chiral = std::max(rep.C_chiral, nrm / g);
      }
    }
  }
  if (rep.g_min < 0.0) rep.violations.push_back("envelope g takes negative values");
  for (int x = 0; x < 3; ++x) {
    if (!lower_ok[x]) {
      rep.violations.push_back(std::string(sym_names[x]) + " is not bounded below by a positive multiple of g");
    }
  }
  auto fmt = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  if (rep.C2 > cap) rep.violations.push_back("achiral upper constant C2 = " + fmt(rep.C2) + " exceeds cap " + fmt(cap));
  if (rep.C_chiral > cap) {
    rep.violations.push_back("chiral constant " + fmt(rep.C_chiral) + " exceeds cap " + fmt(cap));
  }
  return rep;
}

ModelParams derive_params(const KernelSet& ks, double rho0, double eps) {
  const double hh = k0(ks.HH).value;
  if (!(hh > 0.0)) throw std::invalid_argument("derive_params: k0_HH must be positive");
  ModelParams p;
  p.tau = 1.0 / hh;
  p.alpha = k0(ks.HD).value / hh;
  p.kDD0 = k0(ks.DD).value;
  p.rho0 = rho0;
  p.eps = eps;
  return p;
}

double wavenumber_q(const KernelSet& ks, const ModelParams& p, double s0, double sc) {
  if (!(s0 > 0.0)) throw std::domain_error("wavenumber_q: s0 must be positive");
  const double K22 = frank_constants(ks.HH, s0).K22;
  if (!(K22 > 0.0)) throw std::domain_error("wavenumber_q: K22 must be positive");
  return sc * beta_coefficient(ks.cH) * p.rho0 / (s0 * K22);
}

HtpPhysical htp_physical(const KernelSet& dimensional, const HostUnits& host) {
  if (!(host.rho_H > 0.0) || !(host.kB_T > 0.0)) {
    throw std::invalid_argument("htp_physical: rho_H and kB_T must be positive");
  }
  const double scale = host.rho_H / host.kB_T;
  const double k0hh = k0(dimensional.HH).value * scale;
  const double k0hd = k0(dimensional.HD).value * scale;
  HtpPhysical out;
  out.tau = 1.0 / k0hh;
  out.alpha = k0hd / k0hh;
  out.s0 = solve_s0(out.tau);
  if (!(out.s0 > 0.0)) throw std::domain_error("htp_physical: isotropic phase at the implied tau");
  out.sc = sc_from(out.s0, out.alpha / out.tau);
  out.h_tilde = out.sc / out.s0;
  out.beta_tilde = beta_coefficient(dimensional.cH);
  out.K22_tilde = frank_constants(dimensional.HH, out.s0).K22;
  out.h = out.sc * out.beta_tilde / (host.rho_H * out.s0 * out.K22_tilde);
  return out;
}

KernelSet KernelSet::rescaled_to(double tau, double alpha) const {
  if (!(tau > 0.0)) throw std::invalid_argument("rescaled_to: tau must be positive");
  KernelSet out = *this;
  const double hh = k0(HH).value;
  if (!(hh > 0.0)) throw std::invalid_argument("rescaled_to: k0_HH must be positive");
  out.HH = HH.scaled(1.0 / (tau * hh));
  const double hd = k0(HD).value;
  if (hd == 0.0) {
    if (alpha != 0.0) throw std::invalid_argument("rescaled_to: HD kernel is zero, cannot set alpha");
  } else {
    out.HD = HD.scaled(alpha / (tau * hd));
  }
  return out;
}

KernelSet KernelSet::mirrored() const {
  KernelSet out = *this;
  out.cH = cH.scaled(-1.0);
  out.cD = cD.scaled(-1.0);
  return out;
}

}  // namespace chol

namespace chol {

KernelSet KernelSet::demo() {
  const double pi32 = std::pow(std::numbers::pi, 1.5);
  // tau = 0.1 and alpha = 1.75; the chiral amplitude puts q near 1/2 at kDemoRho0.
  const double tau = 0.1, alpha = 1.75;
  KernelSet ks;
  ks.HH.k1 = RadialProfile::gaussian(1.0 / (tau * pi32), 1.0);
  ks.HD.k1 = RadialProfile::gaussian(alpha / (tau * pi32), 1.0);
  ks.DD.k1 = RadialProfile::gaussian(16.0, 1.0);
  ks.cH.f1 = RadialProfile::gaussian(12.2, 0.8);
  ks.envelope = RadialProfile::gaussian(1.0, 1.0);
  return ks;
}

}  // namespace chol
