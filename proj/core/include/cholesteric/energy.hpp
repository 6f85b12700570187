#pragma once

#include <memory>
#include <vector>

#include "cholesteric/bulk.hpp"
#include "cholesteric/grid.hpp"
#include "cholesteric/kernels.hpp"
#include "cholesteric/periodize.hpp"
#include "cholesteric/sphere_quadrature.hpp"

namespace chol {

/// Contributions to F_eps. In the rewritten form the achiral terms are the
/// finite-difference double integrals and the k0 mean-field parts sit in `bulk`.
struct EnergyTerms {
  double bulk = 0.0;
  double HH = 0.0;
  double HD = 0.0;
  double DD = 0.0;
  double cH = 0.0;
  double cD = 0.0;
  bool finite = true;  // false when a site left the physical domain

  double total() const;
};

/// Per-site potentials are skipped for sites identical to an earlier one, so
/// fields that vary along one axis cost one solve per slice.
class EnergyModel {
 public:
  /// tau, alpha and kDD0 come from the kernel moments.
  EnergyModel(const KernelSet& ks, double rho0, double eps, const TorusGrid& g,
              Periodization mode = Periodization::Spectral,
              const SphereQuadrature& quad = SphereQuadrature::standard());

  const ModelParams& params() const { return params_; }
  const TorusGrid& grid() const { return grid_; }
  const SphereQuadrature& quadrature() const { return quad_; }
  double c_eps() const { return c_eps_; }
  const PeriodizedKernel& kernel_HH() const { return *HH_; }
  const PeriodizedKernel& kernel_HD() const { return *HD_; }
  const PeriodizedKernel& kernel_DD() const { return *DD_; }
  const PeriodizedKernel& kernel_cH() const { return *cH_; }
  const PeriodizedKernel& kernel_cD() const { return *cD_; }

  /// Rewritten form; +infinity when a site is not physical.
  double energy(const QField& f) const;
  EnergyTerms terms(const QField& f) const;
  /// Unrewritten form: entropy terms minus plain interaction double integrals.
  EnergyTerms terms_raw(const QField& f) const;
  /// Rewritten form with every double integral summed literally over site
  /// pairs. Grid extents above 12 are refused.
  EnergyTerms terms_direct(const QField& f) const;

  /// Energy and its partial derivatives with respect to the site
  /// coefficients of Q and xi (stored in grad.Q, grad.xi).
  double energy_and_gradient(const QField& f, QField& grad) const;

  /// Bulk block per site, without the DD mean-field term.
  double bulk_density(const QTensor& Q, const QTensor& xi) const;

 private:
  struct SitePotentials;
  bool potentials(const QField& f, SitePotentials& out) const;
  EnergyTerms spectral_terms(const QField& f, const SitePotentials& sp, bool raw, QField* grad) const;

  ModelParams params_;
  TorusGrid grid_;
  SphereQuadrature quad_;
  double c_eps_ = 0.0;
  double k0HH_ = 0.0, k0HD_ = 0.0, k0DD_ = 0.0;
  std::unique_ptr<PeriodizedKernel> HH_, HD_, DD_, cH_, cD_;
  mutable std::vector<QTensor> warm_Q_, warm_xi_;
  mutable std::vector<char> warm_valid_;
};

/// F_eps of the fields. Throws std::invalid_argument if params disagree with
/// the kernel moments (tau, alpha) beyond 1e-9 relative.
double energy_F_eps(const QField& f, const KernelSet& ks, const ModelParams& p);
QField energy_gradient(const QField& f, const KernelSet& ks, const ModelParams& p);

}  // namespace chol
