#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "cholesteric/bulk.hpp"
#include "cholesteric/energy.hpp"
#include "cholesteric/entropy.hpp"
#include "cholesteric/fields.hpp"
#include "cholesteric/kernels.hpp"
#include "cholesteric/minimize.hpp"
#include "cholesteric/periodize.hpp"

using namespace chol;

namespace {

// Demo kernels plus splay/bend anisotropy and a dopant chiral term, so every
// block of the energy is exercised.
KernelSet rich_kernels() {
  KernelSet ks = KernelSet::demo();
  ks.HH.k2 = RadialProfile::gaussian(0.3, 0.8);
  ks.HD.k3 = RadialProfile::gaussian(0.2, 0.9);
  ks.cD.f1 = RadialProfile::gaussian(1.5, 0.8);
  ks.cH.f2 = RadialProfile::gaussian(0.5, 0.7);
  return ks;
}

QField perturbed_helix(const TorusGrid& g, std::uint64_t seed, bool slab) {
  QField f = helical_ansatz(0.5, 0.6, 0.7, g);
  const QField r = random_field(g, seed, 0.05, slab);
  for (std::size_t i = 0; i < g.size(); ++i) {
    f.Q[i] = f.Q[i] + r.Q[i];
    f.xi[i] = f.xi[i] + r.xi[i];
  }
  return f;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 r(0);
  EXPECT_EQ(r.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.next(), 0x6e789e6aa1b965f4ULL);
  SplitMix64 u(42);
  for (int i = 0; i < 100; ++i) {
    const double x = u.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(Fields, RandomFieldIsSeeded) {
  const TorusGrid g = TorusGrid::thin(8);
  const QField a = random_field(g, 9), b = random_field(g, 9), c = random_field(g, 10);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(a.Q[i].coeffs(), b.Q[i].coeffs());
  EXPECT_NE(a.Q[0].coeffs(), c.Q[0].coeffs());
  EXPECT_EQ(a.Q[g.index(0, 0, 3)].coeffs(), a.Q[g.index(2, 3, 3)].coeffs());
}

TEST(Fields, WavenumberOfHelix) {
  const TorusGrid g = TorusGrid::thin(32);
  for (double m : {-1.5, -0.5, 0.0, 0.5, 2.0}) {
    const WavenumberFit fit = extract_wavenumber(helical_ansatz(m, 0.6, 0.7, g));
    EXPECT_NEAR(fit.m, m, 1e-12) << m;
    EXPECT_LT(fit.residual, 1e-10);
    EXPECT_FALSE(fit.degraded);
  }
  EXPECT_THROW(helical_ansatz(0.3, 0.6, 0.7, g), std::domain_error);
}

TEST(Fields, OutOfPlaneDirectorIsFlagged) {
  const TorusGrid g = TorusGrid::thin(16);
  EXPECT_TRUE(extract_wavenumber(constant_field(0.6, 0.7, g, Vec3::UnitZ())).degraded);
}

TEST(Fields, BinaryDumpRoundTrip) {
  const TorusGrid g(4, 6, 8);
  const QField f = perturbed_helix(g, 3, false);
  const auto dir = std::filesystem::temp_directory_path() / "chol_field_test";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "f").string();
  FieldMetadata meta;
  meta.eps = 0.25;
  meta.params.tau = 0.1;
  meta.params.rho0 = 0.2;
  write_field(prefix, f, meta);
  FieldMetadata back;
  const QField h = read_field(prefix, &back);
  EXPECT_EQ(h.grid, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(h.Q[i].coeffs(), f.Q[i].coeffs());
    EXPECT_EQ(h.xi[i].coeffs(), f.xi[i].coeffs());
  }
  EXPECT_EQ(back.eps, 0.25);
  EXPECT_EQ(back.params.rho0, 0.2);
  EXPECT_EQ(std::filesystem::file_size(prefix + ".bin"), g.size() * 80);
  std::filesystem::remove_all(dir);
}

TEST(Periodize, SpectralMassEqualsZerothMoment) {
  const TorusGrid g(8);
  const AchiralKernel k{RadialProfile::gaussian(1.0, 1.0), {}, {}};
  for (double eps : {0.5, 0.25}) {
    const Mat5 m = periodize(OperatorKernel(k), eps, g).mass();
    EXPECT_NEAR(m(0, 0), k0(k).value, 1e-10 * k0(k).value) << eps;
    EXPECT_NEAR((m - m(0, 0) * Mat5::Identity()).norm(), 0.0, 1e-10);
  }
}

TEST(Periodize, LatticeSumAgreesWhenResolved) {
  const TorusGrid g(16);
  const OperatorKernel k(AchiralKernel{RadialProfile::gaussian(1.0, 1.0), {}, {}});
  const double a = periodize(k, 1.0, g).mass()(0, 0);
  const double b = periodize(k, 1.0, g, Periodization::LatticeSum).mass()(0, 0);
  EXPECT_NEAR(a, b, 1e-6 * a);
  EXPECT_THROW(periodize(k, 0.0, g), std::invalid_argument);
}

TEST(Periodize, LatticeSumRefusesHugeImageCounts) {
  const OperatorKernel k(AchiralKernel{RadialProfile::exponential(1.0, 0.01), {}, {}});
  EXPECT_THROW(periodize(k, 2.0, TorusGrid(4), Periodization::LatticeSum), std::length_error);
}

TEST(Convolution, FftMatchesDirectSum) {
  const TorusGrid g(8);
  const QField f = perturbed_helix(g, 5, false);
  const KernelSet ks = rich_kernels();
  for (const OperatorKernel& k : {OperatorKernel(ks.HH), OperatorKernel(ks.cH), OperatorKernel(ks.HD)}) {
    const PeriodizedKernel p = periodize(k, 0.5, g);
    const auto a = convolve_fft(f.Q, p), b = convolve_direct(f.Q, p);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      num += (a[i] - b[i]).coeffs().squaredNorm();
      den += b[i].coeffs().squaredNorm();
    }
    EXPECT_LT(std::sqrt(num / den), 1e-10);
  }
  EXPECT_THROW(convolve_direct(f.Q, periodize(OperatorKernel(ks.HH), 0.5, TorusGrid(16))), std::length_error);
}

TEST(Energy, SpectralMatchesDirectPerTerm) {
  const TorusGrid g(8);
  const EnergyModel model(rich_kernels(), 0.2, 0.5, g);
  const QField f = perturbed_helix(g, 7, false);
  const EnergyTerms a = model.terms(f), b = model.terms_direct(f);
  EXPECT_LT(rel(a.bulk, b.bulk), 1e-10);
  EXPECT_LT(rel(a.HH, b.HH), 1e-10);
  EXPECT_LT(rel(a.HD, b.HD), 1e-10);
  EXPECT_LT(rel(a.DD, b.DD), 1e-10);
  EXPECT_LT(rel(a.cH, b.cH), 1e-10);
  EXPECT_LT(rel(a.cD, b.cD), 1e-10);
}

TEST(Energy, RewrittenEqualsRaw) {
  const TorusGrid g(8);
  const EnergyModel model(rich_kernels(), 0.2, 0.25, g);
  const QField f = perturbed_helix(g, 11, false);
  EXPECT_LT(rel(model.terms(f).total(), model.terms_raw(f).total()), 1e-9);
}

TEST(Energy, TranslationInvariant) {
  const TorusGrid g = TorusGrid::thin(16);
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.5, g);
  const QField f = perturbed_helix(g, 13, true);
  EXPECT_LT(rel(model.energy(f.shifted(0, 0, 5)), model.energy(f)), 1e-12);
}

TEST(Energy, CoarserSphereRuleChangesLittle) {
  const TorusGrid g = TorusGrid::thin(16);
  const EnergyModel fine(KernelSet::demo(), kDemoRho0, 0.5, g);
  const EnergyModel coarse(KernelSet::demo(), kDemoRho0, 0.5, g, Periodization::Spectral,
                           SphereQuadrature::with_degree(63));
  EXPECT_EQ(coarse.quadrature().n_theta(), 32);
  const QField f = perturbed_helix(g, 19, true);
  EXPECT_LT(rel(coarse.energy(f), fine.energy(f)), 1e-8);
}

TEST(Energy, UnphysicalFieldIsInfinite) {
  const TorusGrid g = TorusGrid::thin(8);
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.5, g);
  QField f = helical_ansatz(0.5, 0.6, 0.7, g);
  f.Q[3] = uniaxial(1.2, Vec3::UnitX());
  EXPECT_TRUE(std::isinf(model.energy(f)));
  EXPECT_FALSE(model.terms(f).finite);
}

TEST(Energy, BulkBlockVanishesAtPerturbedEquilibrium) {
  const TorusGrid g = TorusGrid::thin(8);
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.25, g);
  const PerturbedEquilibrium pe = perturbed_equilibrium(model.params());
  const double kHD = model.params().kHD0();
  auto at = [&](double s) {
    const QTensor q = uniaxial(s, Vec3::UnitX());
    return model.bulk_density(q, inverse_lambda(kHD * q));
  };
  EXPECT_NEAR(at(pe.s0_eps), 0.0, 1e-8 * std::abs(model.c_eps()));
  EXPECT_GT(at(pe.s0_eps + 0.01), 0.0);
  EXPECT_GT(at(pe.s0_eps - 0.01), 0.0);
}

TEST(Energy, GradientMatchesFiniteDifferences) {
  const TorusGrid g(8);
  const EnergyModel model(rich_kernels(), 0.2, 0.5, g);
  const QField f = perturbed_helix(g, 17, false);
  QField grad(g);
  model.energy_and_gradient(f, grad);
  const double h = 1e-6;
  for (std::size_t site : {0ul, 77ul, 300ul}) {
    for (int c : {0, 2, 4}) {
      for (bool on_xi : {false, true}) {
        QField p = f, m = f;
        Vec5 e = Vec5::Zero();
        e[c] = h;
        auto& fp = on_xi ? p.xi : p.Q;
        auto& fm = on_xi ? m.xi : m.Q;
        fp[site] = fp[site] + QTensor(e);
        fm[site] = fm[site] - QTensor(e);
        const double fd = (model.energy(p) - model.energy(m)) / (2 * h);
        const double an = (on_xi ? grad.xi : grad.Q)[site][c];
        EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(fd))) << site << ' ' << c << ' ' << on_xi;
      }
    }
  }
}

TEST(Energy, FreeFunctionsCheckParameters) {
  const TorusGrid g = TorusGrid::thin(8);
  const KernelSet ks = KernelSet::demo();
  ModelParams p = derive_params(ks, kDemoRho0, 0.5);
  const QField f = helical_ansatz(0.5, 0.6, 0.7, g);
  EXPECT_NEAR(energy_F_eps(f, ks, p), EnergyModel(ks, kDemoRho0, 0.5, g).energy(f), 1e-12);
  p.tau *= 1.01;
  EXPECT_THROW(energy_F_eps(f, ks, p), std::invalid_argument);
}

TEST(Minimize, DescendsMonotonically) {
  const TorusGrid g = TorusGrid::thin(16);
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.5, g);
  MinimizeOptions opt;
  opt.max_iterations = 200;
  const MinimizeResult r = minimize(random_field(g, 3), model, opt);
  ASSERT_GE(r.energy_trace.size(), 2u);
  for (std::size_t i = 1; i < r.energy_trace.size(); ++i) EXPECT_LE(r.energy_trace[i], r.energy_trace[i - 1]);
  EXPECT_TRUE(r.field.physical());
  EXPECT_THROW(minimize(helical_ansatz(0.5, 1.2, 0.7, g), model), std::domain_error);
}

TEST(Minimize, GradientDescentAgreesWithLbfgsFromHelix) {
  const TorusGrid g = TorusGrid::thin(16);
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.5, g);
  const double s0 = solve_s0(model.params().tau);
  const QField start = helical_ansatz(0.5, s0, solve_sc(model.params().tau, model.params().alpha), g);
  MinimizeOptions lb;
  MinimizeOptions gd;
  gd.method = DescentMethod::GradientDescent;
  gd.max_iterations = 20000;
  gd.gradient_tol = 1e-4;
  lb.gradient_tol = 1e-4;
  const MinimizeResult a = minimize(start, model, lb), b = minimize(start, model, gd);
  EXPECT_TRUE(a.converged);
  EXPECT_NEAR(a.energy_trace.back(), b.energy_trace.back(), 1e-5 * std::abs(a.energy_trace.back()));
  EXPECT_NEAR(extract_wavenumber(a.field).m, 0.5, 1e-6);
}

TEST(Minimize, MultiStartKeepsLowestEnergy) {
  const TorusGrid g = TorusGrid::thin(16);
  const EnergyModel model(KernelSet::demo(), kDemoRho0, 0.5, g);
  MinimizeOptions opt;
  opt.max_iterations = 300;
  const MultiStartResult r = minimize_random_starts(model, 5, 3, opt);
  ASSERT_EQ(r.energies.size(), 3u);
  ASSERT_EQ(r.seeds.size(), 3u);
  for (double e : r.energies) EXPECT_GE(e, r.energies[r.best_index]);
  EXPECT_EQ(r.best.energy_trace.back(), r.energies[r.best_index]);
  EXPECT_THROW(minimize_random_starts(model, 5, 0, opt), std::invalid_argument);
}
