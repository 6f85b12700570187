#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cholesteric/bulk.hpp"
#include "cholesteric/fields.hpp"
#include "cholesteric/kernels.hpp"
#include "cholesteric/oflimit.hpp"

using namespace chol;

namespace {

const double kVolume = std::pow(2 * std::numbers::pi, 3);

LimitCoefficients demo_coefficients(double eps = 0.125) {
  const KernelSet ks = KernelSet::demo();
  return limit_coefficients(ks, derive_params(ks, kDemoRho0, eps));
}

// Smooth non-helical director with splay, twist and bend; n flips sign
// across the period in x3, so Q is periodic.
std::vector<Vec3> wavy_director(const TorusGrid& g) {
  std::vector<Vec3> n(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    const double a = 0.5 * x[2] + 0.3 * std::sin(x[0]);
    n[i] = Vec3(std::cos(a), std::sin(a), 0.4 * std::sin(x[1]) * std::cos(a)).normalized();
  }
  return n;
}

QField limit_field(const std::vector<Vec3>& n, const TorusGrid& g, const LimitCoefficients& c) {
  QField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    f.Q[i] = uniaxial(c.s0, n[i]);
    f.xi[i] = uniaxial(c.sc, n[i]);
  }
  return f;
}

}  // namespace

TEST(Quantize, NearestHalfInteger) {
  EXPECT_EQ(quantize_wavenumber(0.7166), 0.5);
  EXPECT_EQ(quantize_wavenumber(0.4995), 0.5);
  EXPECT_EQ(quantize_wavenumber(1.3), 1.5);
  EXPECT_EQ(quantize_wavenumber(-0.2), 0.0);
  EXPECT_EQ(quantize_wavenumber(-1.1), -1.0);
}

TEST(Quantize, TiesGoToSmallerMagnitude) {
  EXPECT_EQ(quantize_wavenumber(0.25), 0.0);
  EXPECT_EQ(quantize_wavenumber(0.75), 0.5);
  EXPECT_EQ(quantize_wavenumber(-0.75), -0.5);
  EXPECT_EQ(quantize_wavenumber(-1.25), -1.0);
}

TEST(LimitCoefficients, DemoValues) {
  const LimitCoefficients c = demo_coefficients();
  EXPECT_NEAR(c.K22, 5.0, 1e-6);
  EXPECT_NEAR(c.K11, c.K22, 1e-6);
  EXPECT_NEAR(c.s0, solve_s0(0.1), 1e-10);
  EXPECT_NEAR(c.q, c.sc * c.beta * c.rho0 / (c.s0 * c.K22), 1e-14);
  EXPECT_NEAR(c.constant_term(), -c.sc * c.sc * c.rho0 * c.rho0 * c.kDD0 * kVolume / 3.0, 1e-10);
  EXPECT_LT(c.constant_term(), 0.0);
}

TEST(LimitCoefficients, IsotropicPhaseThrows) {
  const KernelSet ks = KernelSet::demo().rescaled_to(0.5, 1.0);
  EXPECT_THROW(limit_coefficients(ks, derive_params(ks, 0.2, 0.1)), std::domain_error);
}

TEST(LimitEnergy, HelixClosedForm) {
  const LimitCoefficients c = demo_coefficients();
  const TorusGrid g = TorusGrid::thin(32);
  for (double m : {0.0, 0.5, 1.0, -0.5}) {
    const OFValue v = energy_F_OF(helical_ansatz(m, c.s0, c.sc, g), c);
    ASSERT_TRUE(v.in_domain);
    const double exact = 0.5 * c.s0 * c.s0 * c.K22 * (m * m - 2 * c.q * m) * kVolume + c.constant_term();
    EXPECT_NEAR(v.value, exact, 1e-9 * std::abs(exact)) << m;
  }
}

TEST(LimitEnergy, GroundStateIsQuantizedWavenumber) {
  const LimitCoefficients c = demo_coefficients();
  const TorusGrid g = TorusGrid::thin(32);
  const double mstar = quantize_wavenumber(c.q);
  const double best = energy_F_OF(helical_ansatz(mstar, c.s0, c.sc, g), c).value;
  for (double m : {mstar - 1.0, mstar - 0.5, mstar + 0.5, mstar + 1.0})
    EXPECT_GT(energy_F_OF(helical_ansatz(m, c.s0, c.sc, g), c).value, best) << m;
}

TEST(LimitEnergy, QFormMatchesDirectorForm) {
  KernelSet ks = KernelSet::demo();
  ks.HH.k2 = RadialProfile::gaussian(0.4, 0.8);  // split the Frank constants
  const LimitCoefficients c = limit_coefficients(ks, derive_params(ks, kDemoRho0, 0.125));
  const TorusGrid g(16);
  const auto n = wavy_director(g);
  const double q_form = energy_F_OF(limit_field(n, g, c), c).value;
  const double d_form = energy_OF_director(n, g, c);
  const double shift = -0.5 * c.s0 * c.s0 * c.K22 * c.q * c.q * kVolume + c.constant_term();
  EXPECT_NEAR(q_form, d_form + shift, 1e-8 * std::abs(q_form));
}

TEST(LimitEnergy, DirectorSignIsIrrelevant) {
  const LimitCoefficients c = demo_coefficients();
  const TorusGrid g(8);
  auto n = wavy_director(g);
  const double a = energy_OF_director(n, g, c);
  for (std::size_t i = 0; i < n.size(); i += 3) n[i] = -n[i];
  EXPECT_NEAR(energy_OF_director(n, g, c), a, 1e-10 * std::abs(a));
}

TEST(LimitEnergy, SpectralAndFiniteDifferenceConverge) {
  const LimitCoefficients c = demo_coefficients();
  const TorusGrid g = TorusGrid::thin(64);
  OFOptions fd;
  fd.spectral = false;
  const QField f = helical_ansatz(0.5, c.s0, c.sc, g);
  const double a = energy_F_OF(f, c).value, b = energy_F_OF(f, c, fd).value;
  EXPECT_NEAR(a, b, 1e-3 * std::abs(a));
}

TEST(LimitEnergy, OffManifoldIsInfinite) {
  const LimitCoefficients c = demo_coefficients();
  const TorusGrid g = TorusGrid::thin(8);
  QField f = helical_ansatz(0.5, c.s0, c.sc, g);
  f.Q[2] = uniaxial(c.s0 + 0.05, Vec3::UnitX());
  OFValue v = energy_F_OF(f, c);
  EXPECT_FALSE(v.in_domain);
  EXPECT_TRUE(std::isinf(v.value));
  EXPECT_NE(v.violation.find("site 2"), std::string::npos);
  f = helical_ansatz(0.5, c.s0, c.sc, g);
  f.xi[4] = f.xi[4] * 1.1;
  EXPECT_FALSE(energy_F_OF(f, c).in_domain);
}

TEST(Gamma, GapsShrinkOnDemoSet) {
  const auto rows = gamma_gap(KernelSet::demo(), kDemoRho0, {0.5, 0.25}, TorusGrid::thin(32));
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_TRUE(std::isnan(r.m_minimizer));
  }
  EXPECT_LT(rows[1].gap, rows[0].gap);
  EXPECT_EQ(rows[0].F_OF, rows[1].F_OF);
}

TEST(Gamma, FailuresBecomeRows) {
  const KernelSet hot = KernelSet::demo().rescaled_to(0.5, 1.0);
  const auto rows = gamma_gap(hot, kDemoRho0, {0.5}, TorusGrid::thin(8));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NE(rows[0].status, "ok");
  EXPECT_TRUE(std::isnan(rows[0].gap));
  std::ostringstream os;
  write_gamma_csv(rows, os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "eps,F_eps_recovery,F_OF,gap,m_minimizer,s0_dev,xi_lock_dev,status");
}
