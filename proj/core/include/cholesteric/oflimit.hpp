#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cholesteric/bulk.hpp"
#include "cholesteric/grid.hpp"
#include "cholesteric/kernels.hpp"

namespace chol {

struct LimitCoefficients {
  ElasticTensor L;
  ChiralVector V;
  double K11 = 0.0, K22 = 0.0, K33 = 0.0;
  double beta = 0.0;
  double q = 0.0;
  double s0 = 0.0, sc = 0.0;
  double rho0 = 0.0;
  double kDD0 = 0.0;

  /// -sc^2 rho0^2 k0_DD |Omega| / 3 on the 2 pi torus.
  double constant_term() const;
};

/// Throws std::domain_error in the isotropic phase.
LimitCoefficients limit_coefficients(const KernelSet& ks, const ModelParams& p);

struct OFOptions {
  double tolerance = 1e-3;  // admissible deviation from the limit manifold
  bool spectral = true;     // spectral derivatives, otherwise centered differences
};

struct OFValue {
  double value = 0.0;      // +infinity outside the domain
  bool in_domain = true;
  std::string violation;
};

OFValue energy_F_OF(const QField& f, const LimitCoefficients& c, const OFOptions& opt = {});

/// (s0^2/2) times the integral of K11 (div n)^2 + K22 (n.curl n + q)^2 + K33 |n x curl n|^2.
/// Derivatives are taken from Q = s0 sigma(n), so sign flips of n are harmless.
double energy_OF_director(const std::vector<Vec3>& n, const TorusGrid& g, const LimitCoefficients& c,
                          const OFOptions& opt = {});

/// Nearest multiple of 1/2; ties go to the smaller magnitude.
double quantize_wavenumber(double q);

struct GammaOptions {
  bool run_minimizer = false;
  std::uint64_t seed = 1;
  int starts = 4;  // random starts per eps, best energy kept
  int max_iterations = 4000;
  int quad_degree = 127;  // sphere rule for the per-site potentials
};

struct GammaRow {
  double eps = 0.0;
  double F_eps_recovery = 0.0;
  double F_OF = 0.0;
  double gap = 0.0;  // |F_eps - F_OF| / |F_OF|
  double m_minimizer = 0.0;
  double s0_dev = 0.0;
  double xi_lock_dev = 0.0;
  std::string status = "ok";
};

/// Recovery-sequence gaps on the helix m* = quantize_wavenumber(q). Failures
/// are recorded in `status` with NaN values.
std::vector<GammaRow> gamma_gap(const KernelSet& ks, double rho0, const std::vector<double>& eps_list,
                                const TorusGrid& g, const GammaOptions& opt = {});

/// Header `eps,F_eps_recovery,F_OF,gap,m_minimizer,s0_dev,xi_lock_dev,status`.
void write_gamma_csv(const std::vector<GammaRow>& rows, std::ostream& os);

}  // namespace chol
