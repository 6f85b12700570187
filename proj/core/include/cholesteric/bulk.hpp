#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace chol {

/// Dimensionless model inputs. k0_HH = 1/tau and k0_HD = alpha/tau.
struct ModelParams {
  double tau = 0.1;
  double alpha = 1.0;
  double rho0 = 0.0;  // dopant density rho_D = rho0 * rho_H * eps
  double eps = 0.0;
  double kDD0 = 0.0;

  double kHH0() const { return 1.0 / tau; }
  double kHD0() const { return alpha / tau; }
  /// Throws std::invalid_argument on tau <= 0, eps < 0 or rho0 < 0.
  void validate() const;
};

struct EquilibriumState {
  double s0 = 0.0;
  double sc = 0.0;
  double htp_dimensionless = 0.0;  // sc / s0
  double c_eps = 0.0;
  double s0_eps = 0.0;
  double sc_eps = 0.0;
};

/// psi_s(s sigma) - s^2 / (3 tau): the bulk energy on the uniaxial ray.
double reduced_energy(double s, double tau);

struct BulkSolution {
  double s0 = 0.0;
  double mu0 = 0.0;           // lambda(s0) = s0 / tau
  double energy = 0.0;        // reduced energy at s0
  bool coexistence = false;   // nematic and isotropic minima within 1e-12
};

/// Global minimizer of the reduced energy. Nematic branch when it wins
/// (ties reported through `coexistence`), otherwise s0 = 0.
BulkSolution solve_bulk(double tau);
double solve_s0(double tau);

/// Coupling 1/tau at which the global minimum leaves the isotropic state.
double critical_coupling(double tol = 1e-6);

/// s_c = lambda^{-1}(alpha s0 / tau) via the Legendre-weighted integral.
double solve_sc(double tau, double alpha);

/// Same quantity by root-finding lambda(s) = alpha s0 / tau in s.
double sc_lambda_route(double s0, double tau, double alpha);

/// sc / s0. Throws std::domain_error in the isotropic phase.
double htp_dimensionless(double tau, double alpha);

/// Rows follow alpha, columns follow tau. Isotropic cells hold NaN.
struct HtpMap {
  std::vector<double> taus;
  std::vector<double> alphas;
  Eigen::MatrixXd s0;
  Eigen::MatrixXd sc;
  Eigen::MatrixXd htp;
};

HtpMap htp_map(const std::vector<double>& taus, const std::vector<double>& alphas);

/// Long-form CSV: header `tau,alpha,s0,sc,htp`, one row per cell.
void write_htp_csv(const HtpMap& map, std::ostream& os);

struct PerturbedEquilibrium {
  double s0_eps = 0.0;
  double sc_eps = 0.0;
  double energy = 0.0;   // minimum of the perturbed bulk energy (equals c_eps * eps^2)
  bool off_ray = false;  // a biaxial probe undercut the uniaxial minimizer
};

/// Minimizer of psi_s(Q) - k0_HH|Q|^2/2 - eps rho0 ln Z(k0_HD Q) over the
/// uniaxial ray. With `audit_biaxial` the minimizer is also probed along
/// s sigma(e1) + t (e2e2 - e3e3) using the sphere rule.
PerturbedEquilibrium perturbed_equilibrium(const ModelParams& p, bool audit_biaxial = false);

/// c_eps for eps > 0. Throws std::invalid_argument for eps <= 0.
double c_eps(const ModelParams& p);

EquilibriumState equilibrium_state(const ModelParams& p);

}  // namespace chol
