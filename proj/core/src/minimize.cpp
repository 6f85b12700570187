#include "cholesteric/minimize.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "cholesteric/entropy.hpp"
#include "cholesteric/fields.hpp"

namespace chol {
namespace {

using Eigen::VectorXd;

// Optimization variables: 10 coefficients (Q then xi) per site, or per
// x3-slice in slab mode.
class Layout {
 public:
  Layout(const TorusGrid& g, bool slab) : g_(g), slab_(slab) {}

  std::size_t units() const { return slab_ ? static_cast<std::size_t>(g_.extent(2)) : g_.size(); }
  double multiplicity() const { return slab_ ? double(g_.extent(0)) * g_.extent(1) : 1.0; }
  std::size_t unit_of(std::size_t site) const { return slab_ ? site % g_.extent(2) : site; }

  VectorXd gather(const QField& f) const {
    VectorXd x(10 * units());
    for (std::size_t u = 0; u < units(); ++u) {
      const std::size_t s = slab_ ? g_.index(0, 0, static_cast<int>(u)) : u;
      x.segment<5>(10 * u) = f.Q[s].coeffs();
      x.segment<5>(10 * u + 5) = f.xi[s].coeffs();
    }
    return x;
  }

  void scatter(const VectorXd& x, QField& f) const {
    for (std::size_t s = 0; s < g_.size(); ++s) {
      const std::size_t u = unit_of(s);
      f.Q[s] = QTensor(x.segment<5>(10 * u));
      f.xi[s] = QTensor(x.segment<5>(10 * u + 5));
    }
  }

  VectorXd reduce(const QField& grad) const {
    VectorXd g = VectorXd::Zero(10 * units());
    for (std::size_t s = 0; s < g_.size(); ++s) {
      const std::size_t u = unit_of(s);
      g.segment<5>(10 * u) += grad.Q[s].coeffs();
      g.segment<5>(10 * u + 5) += grad.xi[s].coeffs();
    }
    return g;
  }

  bool physical(const VectorXd& x, double margin) const {
    for (std::size_t u = 0; u < 2 * units(); ++u) {
      if (!is_physical(QTensor(x.segment<5>(5 * u)), margin)) return false;
    }
    return true;
  }

 private:
  TorusGrid g_;
  bool slab_;
};

}  // namespace

MinimizeResult minimize(const QField& initial, const EnergyModel& model, const MinimizeOptions& opt) {
  if (!initial.physical(opt.margin)) throw std::domain_error("minimize: initial field is not physical");
  const TorusGrid& g = initial.grid;
  const ModelParams& p = model.params();
  const Layout lay(g, opt.slab);
  const double cell = g.cell_volume() * lay.multiplicity();

  // Diagonal metric: eps^2 on the host block, eps/rho0 on the dopant block
  // (frozen when rho0 = 0), divided by the quadrature weight of each unit.
  VectorXd D(10 * lay.units());
  const double dq = p.eps * p.eps / cell;
  const double dx = p.rho0 > 0.0 ? p.eps / p.rho0 / cell : 0.0;
  for (std::size_t u = 0; u < lay.units(); ++u) {
    D.segment<5>(10 * u).setConstant(dq);
    D.segment<5>(10 * u + 5).setConstant(dx);
  }

  MinimizeResult res(initial);
  QField work = initial, grad(g);
  VectorXd x = lay.gather(initial);
  lay.scatter(x, work);
  double E = model.energy_and_gradient(work, grad);
  if (!std::isfinite(E)) throw std::domain_error("minimize: initial energy is not finite");
  VectorXd gv = lay.reduce(grad);
  res.energy_trace.push_back(E);

  std::deque<std::pair<VectorXd, VectorXd>> pairs;
  double t_prev = 1.0;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const VectorXd pg = D.cwiseProduct(gv);
    res.gradient_norm = pg.cwiseAbs().maxCoeff();
    if (res.gradient_norm < opt.gradient_tol) {
      res.converged = true;
      break;
    }

    VectorXd d;
    if (opt.method == DescentMethod::LBFGS && !pairs.empty()) {
      VectorXd q = gv;
      std::vector<double> alpha(pairs.size());
      for (std::size_t i = pairs.size(); i-- > 0;) {
        const auto& [s, y] = pairs[i];
        alpha[i] = s.dot(q) / y.dot(s);
        q -= alpha[i] * y;
      }
      const auto& [sl, yl] = pairs.back();
      const double gamma = sl.dot(yl) / yl.dot(D.cwiseProduct(yl));
      VectorXd r = gamma * D.cwiseProduct(q);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [s, y] = pairs[i];
        const double beta = y.dot(r) / y.dot(s);
        r += s * (alpha[i] - beta);
      }
      d = -r;
      if (d.dot(gv) >= 0.0) {
        pairs.clear();
        d = -pg;
      }
    } else {
      d = -pg;
    }

    double t = 0.0, En = 0.0;
    VectorXd xn;
    QField gradn(g);
    auto line_search = [&](const VectorXd& dir) {
      const double slope = gv.dot(dir);
      t = opt.method == DescentMethod::LBFGS ? 1.0 : std::min(1.0, 2.0 * t_prev);
      for (; t >= 1e-14; t *= 0.5) {
        xn = x + t * dir;
        if (!lay.physical(xn, opt.margin)) continue;
        lay.scatter(xn, work);
        En = model.energy_and_gradient(work, gradn);
        if (std::isfinite(En) && En <= E + 1e-4 * t * slope) return true;
      }
      return false;
    };
    bool accepted = line_search(d);
    // A quasi-Newton direction can push a site sitting on the quadrature cap
    // outward even when it descends globally.
    if (!accepted && !pairs.empty()) {
      pairs.clear();
      accepted = line_search(-pg);
    }
    if (!accepted) {
      res.stagnated = true;
      break;
    }
    t_prev = t;
    const VectorXd gn = lay.reduce(gradn);
    VectorXd s = xn - x, y = gn - gv;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      pairs.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(pairs.size()) > opt.memory) pairs.pop_front();
    }
    x = xn;
    gv = gn;
    E = En;
    res.energy_trace.push_back(E);
  }
  res.iterations = it;
  lay.scatter(x, res.field);

  double biax = 0.0;
  for (const auto& q : res.field.Q) {
    if (q.norm() > 0.0) biax = std::max(biax, uniaxial_project(q).biaxiality);
  }
  res.max_biaxiality = biax;
  const double s0 = solve_s0(p.tau);
  const double ratio = s0 > 0.0 ? sc_from(s0, p.alpha / p.tau) / s0 : 0.0;
  std::vector<QTensor> diff(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) diff[i] = res.field.xi[i] - ratio * res.field.Q[i];
  res.xi_lock = grid_l2(g, diff);
  res.q_norm = grid_l2(g, res.field.Q);
  return res;
}

MultiStartResult minimize_random_starts(const EnergyModel& model, std::uint64_t seed, int starts,
                                        const MinimizeOptions& opt, double amplitude) {
  if (starts < 1) throw std::invalid_argument("minimize_random_starts: need at least one start");
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> seeds(starts);
  for (auto& s : seeds) s = rng.next();

  MultiStartResult out{minimize(random_field(model.grid(), seeds[0], amplitude, opt.slab), model, opt), seeds, {}, 0};
  out.energies.push_back(out.best.energy_trace.back());
  for (int i = 1; i < starts; ++i) {
    MinimizeResult r = minimize(random_field(model.grid(), seeds[i], amplitude, opt.slab), model, opt);
    out.energies.push_back(r.energy_trace.back());
    if (out.energies.back() < out.energies[out.best_index]) {
      out.best_index = i;
      out.best = std::move(r);
    }
  }
  return out;
}

}  // namespace chol
