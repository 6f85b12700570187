#include "cholesteric/energy.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cholesteric/entropy.hpp"
#include "cholesteric/errors.hpp"
#include "cholesteric/parallel.hpp"
#include "fft.hpp"

namespace chol {
namespace {

using cd = std::complex<double>;
using Vec5c = Eigen::Matrix<cd, 5, 1>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double re_dot(const Vec5c& a, const Mat5c& m, const Vec5c& b) { return (a.adjoint() * (m * b))(0, 0).real(); }

}  // namespace

struct EnergyModel::SitePotentials {
  std::vector<double> psiQ, psiX;
  std::vector<QTensor> LQ, LX;
};

double EnergyTerms::total() const {
  if (!finite) return kInf;
  return bulk + HH + HD + DD + cH + cD;
}

EnergyModel::EnergyModel(const KernelSet& ks, double rho0, double eps, const TorusGrid& g, Periodization mode,
                         const SphereQuadrature& quad)
    : params_(derive_params(ks, rho0, eps)), grid_(g), quad_(quad) {
  params_.validate();
  c_eps_ = chol::c_eps(params_);
  k0HH_ = k0(ks.HH).value;
  k0HD_ = k0(ks.HD).value;
  k0DD_ = k0(ks.DD).value;
  HH_ = std::make_unique<PeriodizedKernel>(periodize(OperatorKernel(ks.HH), eps, g, mode));
  HD_ = std::make_unique<PeriodizedKernel>(periodize(OperatorKernel(ks.HD), eps, g, mode));
  DD_ = std::make_unique<PeriodizedKernel>(periodize(OperatorKernel(ks.DD), eps, g, mode));
  cH_ = std::make_unique<PeriodizedKernel>(periodize(OperatorKernel(ks.cH), eps, g, mode));
  cD_ = std::make_unique<PeriodizedKernel>(periodize(OperatorKernel(ks.cD), eps, g, mode));
  warm_Q_.assign(g.size(), QTensor());
  warm_xi_.assign(g.size(), QTensor());
  warm_valid_.assign(2 * g.size(), 0);
}

double EnergyModel::bulk_density(const QTensor& Q, const QTensor& xi) const {
  const double e = params_.eps, r = params_.rho0;
  return psi_s(Q, quad_) / (e * e) + r * psi_s(xi, quad_) / e - k0HH_ * Q.dot(Q) / (2 * e * e) - r / e * k0HD_ * Q.dot(xi) - c_eps_;
}

bool EnergyModel::potentials(const QField& f, SitePotentials& out) const {
  if (!(f.grid == grid_)) throw std::invalid_argument("EnergyModel: field grid does not match the model grid");
  const std::size_t n = grid_.size();
  // Unique tensors over both fields; slot i < n is Q[i], slot n + i is xi[i].
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<std::size_t> owner(2 * n);
  std::vector<std::size_t> uniques;
  for (std::size_t s = 0; s < 2 * n; ++s) {
    const QTensor& t = s < n ? f.Q[s] : f.xi[s - n];
    std::string key(reinterpret_cast<const char*>(t.coeffs().data()), sizeof(double) * 5);
    auto [it, fresh] = seen.emplace(std::move(key), uniques.size());
    if (fresh) uniques.push_back(s);
    owner[s] = it->second;
  }

  std::vector<PotentialEval> evals(uniques.size());
  std::vector<char> ok(uniques.size(), 1);
  parallel_for(uniques.size(), [&](std::size_t u) {
    const std::size_t s = uniques[u];
    const QTensor& t = s < n ? f.Q[s] : f.xi[s - n];
    const QTensor* warm = nullptr;
    if (warm_valid_[s]) warm = s < n ? &warm_Q_[s] : &warm_xi_[s - n];
    try {
      try {
        evals[u] = evaluate_potential(t, quad_, warm);
      } catch (const ConvergenceError&) {
        // A stale warm start from a rejected trial step can stall Newton.
        if (!warm) throw;
        evals[u] = evaluate_potential(t, quad_, nullptr);
      }
    } catch (const std::domain_error&) {
      ok[u] = 0;
    } catch (const std::range_error&) {
      ok[u] = 0;
    } catch (const ConvergenceError&) {
      ok[u] = 0;
    }
  });
  for (char c : ok)
    if (!c) return false;

  out.psiQ.resize(n);
  out.psiX.resize(n);
  out.LQ.resize(n);
  out.LX.resize(n);
  for (std::size_t s = 0; s < 2 * n; ++s) {
    const PotentialEval& e = evals[owner[s]];
    if (s < n) {
      out.psiQ[s] = e.psi;
      out.LQ[s] = e.Lambda;
      warm_Q_[s] = e.Lambda;
    } else {
      out.psiX[s - n] = e.psi;
      out.LX[s - n] = e.Lambda;
      warm_xi_[s - n] = e.Lambda;
    }
    warm_valid_[s] = 1;
  }
  return true;
}

EnergyTerms EnergyModel::spectral_terms(const QField& f, const SitePotentials& sp, bool raw, QField* grad) const {
  const double e = params_.eps, r = params_.rho0;
  const std::size_t n = grid_.size();
  const double dv = grid_.cell_volume();
  EnergyTerms t;

  for (std::size_t i = 0; i < n; ++i) {
    const QTensor &Q = f.Q[i], &X = f.xi[i];
    double b = sp.psiQ[i] / (e * e) + r * sp.psiX[i] / e - c_eps_;
    if (!raw) b -= k0HH_ * Q.dot(Q) / (2 * e * e) + r / e * k0HD_ * Q.dot(X) + 0.5 * r * r * k0DD_ * X.dot(X);
    t.bulk += dv * b;
    if (grad) {
      grad->Q[i] = dv * ((sp.LQ[i] - k0HH_ * Q) * (1.0 / (e * e)) - (r / e * k0HD_) * X);
      grad->xi[i] = dv * ((r / e) * sp.LX[i] - (r / e * k0HD_) * Q - (r * r * k0DD_) * X);
    }
  }

  detail::Fft3 fft(grid_, 10);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 5; ++c) {
      fft.real()[i * 10 + c] = f.Q[i][c];
      fft.real()[i * 10 + 5 + c] = f.xi[i][c];
    }
  fft.forward();

  const double sgn = raw ? -1.0 : 1.0;
  const double cHH = sgn / (2 * e * e), cHD = sgn * r / e, cDD = sgn * 0.5 * r * r;
  const double ccH = r / e, ccD = r * r;
  const Mat5c I = Mat5c::Identity();
  const Mat5c cH0 = raw ? Mat5c::Zero() : cH_->symbol(0);
  const Mat5c cD0 = raw ? Mat5c::Zero() : cD_->symbol(0);
  auto* spec = fft.spectrum();
  const double norm = dv / static_cast<double>(n);
  for (std::size_t h = 0; h < fft.spectrum_size(); ++h) {
    const Vec5c q = Eigen::Map<Vec5c>(spec + h * 10);
    const Vec5c x = Eigen::Map<Vec5c>(spec + h * 10 + 5);
    const Mat5c mHH = raw ? HH_->symbol(h) : Mat5c(k0HH_ * I - HH_->symbol(h));
    const Mat5c mHD = raw ? HD_->symbol(h) : Mat5c(k0HD_ * I - HD_->symbol(h));
    const Mat5c mDD = raw ? DD_->symbol(h) : Mat5c(k0DD_ * I - DD_->symbol(h));
    const Mat5c mcH = cH_->symbol(h) - cH0;
    const Mat5c mcD = cD_->symbol(h) - cD0;
    const double w = fft.weight(h) * norm;
    t.HH += cHH * w * re_dot(q, mHH, q);
    t.HD += cHD * w * re_dot(q, mHD, x);
    t.DD += cDD * w * re_dot(x, mDD, x);
    t.cH += ccH * w * re_dot(x, mcH, q);
    t.cD += ccD * w * re_dot(x, mcD, x);
    if (grad) {
      Eigen::Map<Vec5c>(spec + h * 10) =
          cHH * (mHH + mHH.adjoint()) * q + cHD * mHD * x + ccH * mcH.adjoint() * x;
      Eigen::Map<Vec5c>(spec + h * 10 + 5) = cHD * mHD.adjoint() * q + cDD * (mDD + mDD.adjoint()) * x +
                                              ccH * mcH * q + ccD * (mcD + mcD.adjoint()) * x;
    }
  }
  if (grad) {
    fft.backward();
    for (std::size_t i = 0; i < n; ++i) {
      grad->Q[i] = grad->Q[i] + QTensor(norm * Eigen::Map<const Vec5>(fft.real() + i * 10));
      grad->xi[i] = grad->xi[i] + QTensor(norm * Eigen::Map<const Vec5>(fft.real() + i * 10 + 5));
    }
  }
  return t;
}

EnergyTerms EnergyModel::terms(const QField& f) const {
  SitePotentials sp;
  if (!potentials(f, sp)) {
    EnergyTerms t;
    t.finite = false;
    return t;
  }
  return spectral_terms(f, sp, false, nullptr);
}

EnergyTerms EnergyModel::terms_raw(const QField& f) const {
  SitePotentials sp;
  if (!potentials(f, sp)) {
    EnergyTerms t;
    t.finite = false;
    return t;
  }
  return spectral_terms(f, sp, true, nullptr);
}

double EnergyModel::energy(const QField& f) const { return terms(f).total(); }

double EnergyModel::energy_and_gradient(const QField& f, QField& grad) const {
  SitePotentials sp;
  if (!potentials(f, sp)) return kInf;
  if (!(grad.grid == grid_)) grad = QField(grid_);
  return spectral_terms(f, sp, false, &grad).total();
}

EnergyTerms EnergyModel::terms_direct(const QField& f) const {
  SitePotentials sp;
  EnergyTerms t;
  if (!potentials(f, sp)) {
    t.finite = false;
    return t;
  }
  const double e = params_.eps, r = params_.rho0;
  const double dv = grid_.cell_volume();
  const auto convHH = convolve_direct(f.Q, *HH_);
  const auto convHD = convolve_direct(f.xi, *HD_);
  const auto convDD = convolve_direct(f.xi, *DD_);
  const auto convcH = convolve_direct(f.Q, *cH_);
  const auto convcD = convolve_direct(f.xi, *cD_);
  const Mat5 mcH = cH_->mass(), mcD = cD_->mass();
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const QTensor &Q = f.Q[i], &X = f.xi[i];
    t.bulk += dv * (sp.psiQ[i] / (e * e) + r * sp.psiX[i] / e - c_eps_ - k0HH_ * Q.dot(Q) / (2 * e * e) -
                    r / e * k0HD_ * Q.dot(X) - 0.5 * r * r * k0DD_ * X.dot(X));
    t.HH += dv / (2 * e * e) * (k0HH_ * Q.dot(Q) - Q.dot(convHH[i]));
    t.HD += dv * r / e * (k0HD_ * Q.dot(X) - Q.dot(convHD[i]));
    t.DD += dv * 0.5 * r * r * (k0DD_ * X.dot(X) - X.dot(convDD[i]));
    t.cH += dv * r / e * (X.dot(convcH[i]) - X.coeffs().dot(mcH * Q.coeffs()));
    t.cD += dv * r * r * (X.dot(convcD[i]) - X.coeffs().dot(mcD * X.coeffs()));
  }
  return t;
}

namespace {

EnergyModel checked_model(const QField& f, const KernelSet& ks, const ModelParams& p) {
  const ModelParams d = derive_params(ks, p.rho0, p.eps);
  if (std::abs(d.tau - p.tau) > 1e-9 * d.tau || std::abs(d.alpha - p.alpha) > 1e-9 * std::max(1.0, std::abs(d.alpha))) {
    throw std::invalid_argument("energy_F_eps: tau and alpha must match the kernel moments (tau " +
                                std::to_string(d.tau) + ", alpha " + std::to_string(d.alpha) + ")");
  }
  return EnergyModel(ks, p.rho0, p.eps, f.grid);
}

}  // namespace

double energy_F_eps(const QField& f, const KernelSet& ks, const ModelParams& p) {
  return checked_model(f, ks, p).energy(f);
}

QField energy_gradient(const QField& f, const KernelSet& ks, const ModelParams& p) {
  QField g(f.grid);
  const double e = checked_model(f, ks, p).energy_and_gradient(f, g);
  if (!std::isfinite(e)) throw std::domain_error("energy_gradient: fields are not physical");
  return g;
}

}  // namespace chol
