#include "cholesteric/oflimit.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cholesteric/energy.hpp"
#include "cholesteric/entropy.hpp"
#include "cholesteric/fields.hpp"
#include "cholesteric/minimize.hpp"
#include "fft.hpp"

namespace chol {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double torus_volume() { return std::pow(2.0 * std::numbers::pi, 3); }

std::vector<Gradient> gradient_field(const std::vector<QTensor>& a, const TorusGrid& g, bool spectral) {
  std::vector<Gradient> out(g.size());
  if (!spectral) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (int ax = 0; ax < 3; ++ax) {
        const int d[3] = {ax == 0, ax == 1, ax == 2};
        const std::size_t fwd = g.shifted(i, d[0], d[1], d[2]);
        const std::size_t bwd = g.shifted(i, -d[0], -d[1], -d[2]);
        out[i][ax] = (a[fwd] - a[bwd]) * (0.5 / g.spacing(ax));
      }
    }
    return out;
  }
  detail::Fft3 fft(g, 5);
  std::vector<std::complex<double>> spec(fft.spectrum_size() * 5);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int c = 0; c < 5; ++c) fft.real()[i * 5 + c] = a[i][c];
  fft.forward();
  std::copy(fft.spectrum(), fft.spectrum() + spec.size(), spec.begin());
  for (int ax = 0; ax < 3; ++ax) {
    for (std::size_t h = 0; h < fft.spectrum_size(); ++h) {
      const int k = fft.wavevector(h)[ax];
      const bool nyquist = 2 * std::abs(k) == g.extent(ax);
      const std::complex<double> ik(0.0, nyquist ? 0.0 : double(k));
      for (int c = 0; c < 5; ++c) fft.spectrum()[h * 5 + c] = ik * spec[h * 5 + c];
    }
    fft.backward();
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i][ax] = QTensor(scale * Eigen::Map<const Vec5>(fft.real() + i * 5));
  }
  return out;
}

}  // namespace

double LimitCoefficients::constant_term() const { return -sc * sc * rho0 * rho0 * kDD0 * torus_volume() / 3.0; }

LimitCoefficients limit_coefficients(const KernelSet& ks, const ModelParams& p) {
  const double s0 = solve_s0(p.tau);
  if (!(s0 > 0.0)) throw std::domain_error("limit_coefficients: isotropic phase");
  const double sc = sc_from(s0, p.alpha / p.tau);
  const FrankConstants K = frank_constants(ks.HH, s0);
  const double beta = beta_coefficient(ks.cH);
  return LimitCoefficients{ElasticTensor(ks.HH),
                           ChiralVector(ks.cH),
                           K.K11,
                           K.K22,
                           K.K33,
                           beta,
                           sc * beta * p.rho0 / (s0 * K.K22),
                           s0,
                           sc,
                           p.rho0,
                           p.kDD0};
}

OFValue energy_F_OF(const QField& f, const LimitCoefficients& c, const OFOptions& opt) {
  const TorusGrid& g = f.grid;
  OFValue out;
  const double ratio = c.sc / c.s0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::ostringstream why;
    const UniaxialState u = uniaxial_project(f.Q[i]);
    if (std::abs(u.s - c.s0) > opt.tolerance) {
      why << "site " << i << ": |s - s0| = " << std::abs(u.s - c.s0);
    } else if (u.biaxiality > opt.tolerance) {
      why << "site " << i << ": biaxiality " << u.biaxiality;
    } else if ((f.xi[i] - ratio * f.Q[i]).norm() > opt.tolerance) {
      why << "site " << i << ": xi is not locked to (sc/s0) Q";
    } else {
      continue;
    }
    out.value = std::numeric_limits<double>::infinity();
    out.in_domain = false;
    out.violation = why.str();
    return out;
  }
  const auto grad = gradient_field(f.Q, g, opt.spectral);
  const double w = c.sc * c.rho0 / c.s0;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += c.L.energy_density(grad[i]) + w * c.V(f.Q[i], grad[i]);
  out.value = g.cell_volume() * sum + c.constant_term();
  return out;
}

double energy_OF_director(const std::vector<Vec3>& n, const TorusGrid& g, const LimitCoefficients& c,
                          const OFOptions& opt) {
  if (n.size() != g.size()) throw std::invalid_argument("energy_OF_director: field size does not match the grid");
  std::vector<QTensor> q(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) q[i] = sigma(n[i]);
  const auto grad = gradient_field(q, g, opt.spectral);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 ni = n[i].normalized();
    // d_a n = (d_a sigma(n)) n since n . d_a n = 0.
    Mat3 dn;  // dn(j, a) = d_a n_j
    for (int a = 0; a < 3; ++a) dn.col(a) = grad[i][a].matrix() * ni;
    const double div = dn.trace();
    const Vec3 curl(dn(2, 1) - dn(1, 2), dn(0, 2) - dn(2, 0), dn(1, 0) - dn(0, 1));
    const double twist = ni.dot(curl) + c.q;
    sum += c.K11 * div * div + c.K22 * twist * twist + c.K33 * ni.cross(curl).squaredNorm();
  }
  return 0.5 * c.s0 * c.s0 * g.cell_volume() * sum;
}

double quantize_wavenumber(double q) {
  const double x = 2.0 * q;
  const double lo = std::floor(x), hi = lo + 1.0;
  const double dlo = x - lo, dhi = hi - x;
  double m2;
  if (dlo < dhi) {
    m2 = lo;
  } else if (dhi < dlo) {
    m2 = hi;
  } else {
    m2 = std::abs(lo) < std::abs(hi) ? lo : hi;
  }
  return m2 / 2.0 + 0.0;
}

std::vector<GammaRow> gamma_gap(const KernelSet& ks, double rho0, const std::vector<double>& eps_list,
                                const TorusGrid& g, const GammaOptions& opt) {
  std::vector<GammaRow> rows;
  for (double eps : eps_list) {
    GammaRow row;
    row.eps = eps;
    try {
      const ModelParams p = derive_params(ks, rho0, eps);
      const LimitCoefficients c = limit_coefficients(ks, p);
      const double m = quantize_wavenumber(c.q);
      const PerturbedEquilibrium pe = perturbed_equilibrium(p);
      const EnergyModel model(ks, rho0, eps, g, Periodization::Spectral,
                              SphereQuadrature::with_degree(opt.quad_degree));
      row.F_eps_recovery = model.energy(helical_ansatz(m, pe.s0_eps, pe.sc_eps, g));
      row.F_OF = energy_F_OF(helical_ansatz(m, c.s0, c.sc, g), c).value;
      row.gap = std::abs(row.F_eps_recovery - row.F_OF) / std::abs(row.F_OF);
      if (opt.run_minimizer) {
        MinimizeOptions mo;
        mo.max_iterations = opt.max_iterations;
        const MinimizeResult r = minimize_random_starts(model, opt.seed, opt.starts, mo).best;
        row.m_minimizer = extract_wavenumber(r.field).m;
        double dev = 0.0;
        for (const auto& q : r.field.Q) dev = std::max(dev, std::abs(uniaxial_project(q).s - c.s0));
        row.s0_dev = dev;
        row.xi_lock_dev = r.xi_lock / r.q_norm;
      } else {
        row.m_minimizer = row.s0_dev = row.xi_lock_dev = kNaN;
      }
    } catch (const std::exception& e) {
      row.F_eps_recovery = row.F_OF = row.gap = row.m_minimizer = row.s0_dev = row.xi_lock_dev = kNaN;
      std::string tag = e.what();
      for (char& ch : tag)
        if (ch == ',' || ch == '\n') ch = ';';
      row.status = "error: " + tag;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_gamma_csv(const std::vector<GammaRow>& rows, std::ostream& os) {
  os << "eps,F_eps_recovery,F_OF,gap,m_minimizer,s0_dev,xi_lock_dev,status\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.eps << ',' << r.F_eps_recovery << ',' << r.F_OF << ',' << r.gap << ',' << r.m_minimizer << ','
       << r.s0_dev << ',' << r.xi_lock_dev << ',' << r.status << '\n';
  }
}

}  // namespace chol
