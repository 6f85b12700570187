#include "cholesteric/bulk.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "cholesteric/entropy.hpp"
#include "cholesteric/parallel.hpp"

namespace chol {
namespace {

constexpr int kScanPoints = 400;
constexpr double kTieTol = 1e-12;

double refine_root(const std::function<double(double)>& g, double a, double b) {
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
  const auto r = boost::math::tools::toms748_solve(g, a, b, tol, iters);
  return 0.5 * (r.first + r.second);
}

// Sign-change roots of g on (lo, hi), scanned on a uniform grid.
std::vector<double> scan_roots(const std::function<double(double)>& g, double lo, double hi) {
  std::vector<double> roots;
  double a = lo, ga = g(lo);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double b = lo + (hi - lo) * i / kScanPoints;
    const double gb = g(b);
    if (ga == 0.0) {
      roots.push_back(a);
    } else if (ga * gb < 0.0) {
      roots.push_back(refine_root(g, a, b));
    }
    a = b;
    ga = gb;
  }
  return roots;
}

// Energy of a critical point parametrized by mu = lambda(s).
double energy_at_mu(double mu, double tau) {
  const double s = s_of_mu(mu);
  return 2.0 / 3.0 * mu * s - log_z_uniaxial(mu) - s * s / (3.0 * tau);
}

}  // namespace

void ModelParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be non-negative");
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) throw std::invalid_argument("rho0 must be non-negative");
  if (!std::isfinite(alpha) || !std::isfinite(kDD0)) throw std::invalid_argument("alpha and kDD0 must be finite");
}

double reduced_energy(double s, double tau) { return psi_uniaxial(s) - s * s / (3.0 * tau); }

BulkSolution solve_bulk(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("solve_bulk: tau must be positive");
  const double e0 = -std::log(4.0 * std::numbers::pi);
  auto g = [tau](double mu) { return s_of_mu(mu) - tau * mu; };

  // Critical points satisfy s(mu) = tau mu with s in (-1/2, 1).
  std::vector<double> roots = scan_roots(g, 1e-9, 1.0 / tau);
  for (double r : scan_roots(g, -0.5 / tau, -1e-9)) roots.push_back(r);

  BulkSolution best{0.0, 0.0, e0, false};
  for (double mu : roots) {
    const double e = energy_at_mu(mu, tau);
    const double s = s_of_mu(mu);
    if (e < best.energy - kTieTol || (s > 0 && std::abs(e - e0) <= kTieTol && best.s0 == 0.0)) {
      best = {s, mu, e, std::abs(e - e0) <= kTieTol};
    }
  }
  return best;
}

double solve_s0(double tau) { return solve_bulk(tau).s0; }

double critical_coupling(double tol) {
  // Energy gap between the best nematic critical point and the isotropic state.
  auto gap = [](double k) {
    const double tau = 1.0 / k;
    auto g = [tau](double mu) { return s_of_mu(mu) - tau * mu; };
    double best = 1.0;
    for (double mu : scan_roots(g, 1e-9, 1.0 / tau)) {
      best = std::min(best, energy_at_mu(mu, tau) + std::log(4.0 * std::numbers::pi));
    }
    return best;
  };
  double lo = 6.0, hi = 7.5;  // isotropic at 6.0 (no nematic branch), nematic at 7.5
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_sc(double tau, double alpha) {
  const double s0 = solve_s0(tau);
  return sc_from(s0, alpha / tau);
}

double sc_lambda_route(double s0, double tau, double alpha) {
  const double y = alpha * s0 / tau;
  if (y == 0.0) return 0.0;
  auto f = [y](double s) { return lambda_scalar(s) - y; };
  // lambda blows up at the ends of (-1/2, 1); step toward the end only until
  // it passes y so the bracket stays inside the quadrature range.
  double a = 0.0, b = y > 0.0 ? 0.5 : -0.25;
  const double end = y > 0.0 ? kScalarMax : kScalarMin;
  while ((f(b) > 0.0) != (y > 0.0)) {
    a = b;
    b = 0.5 * (b + end);
  }
  return refine_root(f, std::min(a, b), std::max(a, b));
}

double htp_dimensionless(double tau, double alpha) {
  const double s0 = solve_s0(tau);
  if (s0 <= 0.0) {
    throw std::domain_error("htp_dimensionless: isotropic phase at tau = " + std::to_string(tau));
  }
  return sc_from(s0, alpha / tau) / s0;
}

HtpMap htp_map(const std::vector<double>& taus, const std::vector<double>& alphas) {
  HtpMap m;
  m.taus = taus;
  m.alphas = alphas;
  const auto na = static_cast<Eigen::Index>(alphas.size());
  const auto nt = static_cast<Eigen::Index>(taus.size());
  m.s0.resize(na, nt);
  m.sc.resize(na, nt);
  m.htp.resize(na, nt);
  std::vector<double> s0(taus.size());
  parallel_for(taus.size(), [&](std::size_t j) { s0[j] = solve_s0(taus[j]); });
  const double nan = std::numeric_limits<double>::quiet_NaN();
  parallel_for(alphas.size() * taus.size(), [&](std::size_t idx) {
    const std::size_t i = idx / taus.size(), j = idx % taus.size();
    if (s0[j] > 0.0) {
      const double sc = sc_from(s0[j], alphas[i] / taus[j]);
      m.s0(i, j) = s0[j];
      m.sc(i, j) = sc;
      m.htp(i, j) = sc / s0[j];
    } else {
      m.s0(i, j) = 0.0;
      m.sc(i, j) = nan;
      m.htp(i, j) = nan;
    }
  });
  return m;
}

void write_htp_csv(const HtpMap& map, std::ostream& os) {
  os << "tau,alpha,s0,sc,htp\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < map.alphas.size(); ++i) {
    for (std::size_t j = 0; j < map.taus.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
      os << map.taus[j] << ',' << map.alphas[i] << ',' << map.s0(r, c) << ',' << map.sc(r, c) << ','
         << map.htp(r, c) << '\n';
    }
  }
}

PerturbedEquilibrium perturbed_equilibrium(const ModelParams& p, bool audit_biaxial) {
  p.validate();
  const double k = p.kHH0(), khd = p.kHD0(), w = p.eps * p.rho0;

  // Stationarity on the ray in mu = lambda(s): mu = k s + w khd s(khd s).
  auto g = [&](double mu) {
    const double s = s_of_mu(mu);
    return mu - k * s - w * khd * s_of_mu(khd * s);
  };
  auto energy = [&](double mu) {
    const double s = s_of_mu(mu);
    return 2.0 / 3.0 * mu * s - log_z_uniaxial(mu) - k * s * s / 3.0 - w * log_z_uniaxial(khd * s);
  };
  const double span = k + w * std::abs(khd);
  std::vector<double> roots = scan_roots(g, 1e-9, span);
  for (double r : scan_roots(g, -0.5 * span, -1e-9)) roots.push_back(r);

  PerturbedEquilibrium out;
  out.energy = energy(0.0);
  double best_mu = 0.0;
  for (double mu : roots) {
    const double e = energy(mu);
    if (e < out.energy - kTieTol) {
      out.energy = e;
      best_mu = mu;
    }
  }
  out.s0_eps = s_of_mu(best_mu);
  out.sc_eps = s_of_mu(khd * out.s0_eps);

  if (audit_biaxial && out.s0_eps != 0.0) {
    const auto& quad = SphereQuadrature::standard();
    auto full = [&](double s, double t) {
      const Vec3 e1 = Vec3::UnitX(), e2 = Vec3::UnitY(), e3 = Vec3::UnitZ();
      const QTensor q = s * sigma(e1) + t * QTensor::from_matrix(e2 * e2.transpose() - e3 * e3.transpose());
      return psi_s(q, quad) - 0.5 * k * q.dot(q) - w * log_partition(khd * q, quad);
    };
    const double base = full(out.s0_eps, 0.0);
    for (double t : {-1e-2, -1e-3, 1e-3, 1e-2}) {
      if (full(out.s0_eps, t) < base - 1e-10) out.off_ray = true;
    }
  }
  return out;
}

double c_eps(const ModelParams& p) {
  if (!(p.eps > 0.0)) throw std::invalid_argument("c_eps: eps must be positive");
  return perturbed_equilibrium(p).energy / (p.eps * p.eps);
}

EquilibriumState equilibrium_state(const ModelParams& p) {
  p.validate();
  EquilibriumState st;
  st.s0 = solve_s0(p.tau);
  st.sc = st.s0 > 0.0 ? sc_from(st.s0, p.alpha / p.tau) : 0.0;
  st.htp_dimensionless = st.s0 > 0.0 ? st.sc / st.s0 : std::numeric_limits<double>::quiet_NaN();
  if (p.eps > 0.0) {
    const PerturbedEquilibrium pe = perturbed_equilibrium(p);
    st.s0_eps = pe.s0_eps;
    st.sc_eps = pe.sc_eps;
    st.c_eps = pe.energy / (p.eps * p.eps);
  } else {
    st.s0_eps = st.s0;
    st.sc_eps = st.sc;
  }
  return st;
}

}  // namespace chol
