#include "cholesteric/periodize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "cholesteric/sphere_quadrature.hpp"
#include "fft.hpp"

namespace chol {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// One term f(r) r^d T(omega) with the azimuthal average of T written as a
// quartic polynomial in mu = omega_3.
struct TermSymbol {
  RadialProfile f;
  int degree;
  std::array<Mat5, 5> poly;
};

std::array<Mat5, 5> azimuthal_polynomial(Generator gen) {
  constexpr int kPhi = 12;
  const double mu[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::array<Mat5, 5> avg;
  Eigen::Matrix<double, 5, 5> vander;
  for (int j = 0; j < 5; ++j) {
    const double st = std::sqrt(std::max(0.0, 1.0 - mu[j] * mu[j]));
    avg[j].setZero();
    for (int p = 0; p < kPhi; ++p) {
      const double phi = 2.0 * kPi * p / kPhi;
      avg[j] += generator_matrix(gen, Vec3(st * std::cos(phi), st * std::sin(phi), mu[j]));
    }
    avg[j] /= kPhi;
    for (int n = 0; n < 5; ++n) vander(j, n) = std::pow(mu[j], n);
  }
  const Eigen::Matrix<double, 5, 5> inv = vander.inverse();
  std::array<Mat5, 5> c;
  for (int n = 0; n < 5; ++n) {
    c[n].setZero();
    for (int j = 0; j < 5; ++j) c[n] += inv(n, j) * avg[j];
  }
  return c;
}

class SymbolEvaluator {
 public:
  explicit SymbolEvaluator(const OperatorKernel& k) {
    gauss_legendre(kNodes, -1.0, 1.0, gx_, gw_);
    for (const auto& t : k.terms()) terms_.push_back({t.profile, generator_degree(t.gen), azimuthal_polynomial(t.gen)});
  }

  // Transform at rho * e3.
  Mat5c axial(double rho) const {
    Mat5c out = Mat5c::Zero();
    for (const auto& t : terms_) {
      const auto J = radial(t, rho);
      const cd R[5] = {2.0 * J[0], cd(0.0, -2.0) * J[1], (2.0 * J[0] - 4.0 * J[2]) / 3.0,
                       cd(0.0, 1.0) * (4.0 * J[3] - 6.0 * J[1]) / 5.0,
                       (14.0 * J[0] - 40.0 * J[2] + 16.0 * J[4]) / 35.0};
      for (int n = 0; n < 5; ++n) out += 2.0 * kPi * R[n] * t.poly[n].cast<cd>();
    }
    return out;
  }

  Mat5c at(const Vec3& kappa, double cache_key = -1.0) const {
    const double rho = kappa.norm();
    const Mat5c s0 = cache_key >= 0.0 ? cached(cache_key, rho) : axial(rho);
    if (rho == 0.0) return s0;
    const Mat5 b = rotation_rep(frame(kappa / rho));
    return b.cast<cd>() * s0 * b.transpose().cast<cd>();
  }

 private:
  static constexpr int kNodes = 16;

  std::array<double, 5> radial(const TermSymbol& t, double rho) const {
    std::vector<double> pts = t.f.breakpoints();
    const double cut = t.f.cutoff();
    pts.push_back(0.0);
    pts.push_back(cut);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::array<double, 5> J{};
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
      const double a = pts[s], b = std::min(pts[s + 1], cut);
      if (b <= a) continue;
      const int panels = 8 + static_cast<int>(std::ceil(rho * (b - a) / 2.0));
      const double len = (b - a) / panels;
      for (int p = 0; p < panels; ++p) {
        const double lo = a + p * len;
        for (int q = 0; q < kNodes; ++q) {
          const double r = lo + 0.5 * len * (gx_[q] + 1.0);
          const double w = 0.5 * len * gw_[q] * t.f(r) * std::pow(r, t.degree + 2);
          if (w == 0.0) continue;
          const double x = rho * r;
          for (int l = 0; l < 5; ++l) J[l] += w * (x == 0.0 ? (l == 0 ? 1.0 : 0.0) : std::sph_bessel(l, x));
        }
      }
    }
    return J;
  }

  Mat5c cached(double key, double rho) const {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, axial(rho)).first->second;
  }

  static Mat3 frame(const Vec3& w) {
    const Vec3 a = std::abs(w.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 u = (a - a.dot(w) * w).normalized();
    Mat3 r;
    r.col(0) = u;
    r.col(1) = w.cross(u);
    r.col(2) = w;
    return r;
  }

  std::vector<TermSymbol> terms_;
  std::vector<double> gx_, gw_;
  mutable std::map<double, Mat5c> cache_;
};

std::vector<Mat5c> spectral_symbol(const OperatorKernel& k, double eps, const TorusGrid& g) {
  const SymbolEvaluator ev(k);
  const std::size_t ns = detail::half_spectrum_size(g);
  std::vector<Mat5c> out(ns, Mat5c::Zero());
  if (k.is_zero()) return out;
  for (std::size_t h = 0; h < ns; ++h) {
    const auto kv = detail::half_wavevector(g, h);
    // Nyquist components stand for both signs; average over the aliases.
    std::vector<std::array<int, 3>> aliases{kv};
    for (int a = 0; a < 3; ++a) {
      if (std::abs(kv[a]) * 2 != g.extent(a) || kv[a] == 0) continue;
      const std::size_t m = aliases.size();
      for (std::size_t i = 0; i < m; ++i) {
        auto v = aliases[i];
        v[a] = -v[a];
        aliases.push_back(v);
      }
    }
    Mat5c acc = Mat5c::Zero();
    for (const auto& v : aliases) {
      const double k2 = double(v[0]) * v[0] + double(v[1]) * v[1] + double(v[2]) * v[2];
      acc += ev.at(eps * Vec3(v[0], v[1], v[2]), k2);
    }
    out[h] = acc / static_cast<double>(aliases.size());
  }
  return out;
}

std::vector<Mat5c> lattice_symbol(const OperatorKernel& k, double eps, const TorusGrid& g) {
  const std::size_t ns = detail::half_spectrum_size(g);
  if (k.is_zero()) return std::vector<Mat5c>(ns, Mat5c::Zero());
  const double reach = eps * k.cutoff();
  const int m = static_cast<int>(std::ceil(reach / (2.0 * kPi))) + 1;
  if (m > 64) throw std::length_error("periodize: lattice sum needs more than 64 images per axis");
  detail::Fft3 fft(g, 25);
  const double inv_e3 = 1.0 / (eps * eps * eps);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    Vec3 x;
    for (int a = 0; a < 3; ++a) {
      const int ci = c[a] <= g.extent(a) / 2 ? c[a] : c[a] - g.extent(a);
      x[a] = ci * g.spacing(a);
    }
    Mat5 acc = Mat5::Zero();
    for (int n1 = -m; n1 <= m; ++n1)
      for (int n2 = -m; n2 <= m; ++n2)
        for (int n3 = -m; n3 <= m; ++n3) {
          const Vec3 z = (x + 2.0 * kPi * Vec3(n1, n2, n3)) / eps;
          if (z.norm() > k.cutoff()) continue;
          acc += k.at(z);
        }
    acc *= inv_e3;
    for (int e = 0; e < 25; ++e) fft.real()[i * 25 + e] = acc.data()[e];
  }
  fft.forward();
  std::vector<Mat5c> out(ns);
  const double dv = g.cell_volume();
  for (std::size_t h = 0; h < ns; ++h) {
    for (int e = 0; e < 25; ++e) out[h].data()[e] = dv * fft.spectrum()[h * 25 + e];
  }
  return out;
}

}  // namespace

PeriodizedKernel::PeriodizedKernel(const TorusGrid& g, double eps, std::vector<Mat5c> symbol, bool odd)
    : grid_(g), eps_(eps), symbol_(std::move(symbol)), odd_(odd) {
  if (symbol_.size() != detail::half_spectrum_size(g)) {
    throw std::invalid_argument("PeriodizedKernel: symbol size does not match the grid");
  }
  zero_ = true;
  for (const auto& s : symbol_) zero_ = zero_ && s.isZero(0.0);
}

Mat5 PeriodizedKernel::mass() const { return symbol_[0].real(); }

std::vector<Mat5> PeriodizedKernel::real_space() const {
  detail::Fft3 fft(grid_, 25);
  for (std::size_t h = 0; h < symbol_.size(); ++h) {
    for (int e = 0; e < 25; ++e) fft.spectrum()[h * 25 + e] = symbol_[h].data()[e];
  }
  fft.backward();
  const double scale = 1.0 / std::pow(2.0 * kPi, 3);
  std::vector<Mat5> out(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    for (int e = 0; e < 25; ++e) out[i].data()[e] = scale * fft.real()[i * 25 + e];
  }
  return out;
}

Mat5c kernel_transform(const OperatorKernel& k, const Vec3& kappa) { return SymbolEvaluator(k).at(kappa); }

PeriodizedKernel periodize(const OperatorKernel& k, double eps, const TorusGrid& g, Periodization mode) {
  if (!(eps > 0.0)) throw std::invalid_argument("periodize: eps must be positive");
  auto sym = mode == Periodization::Spectral ? spectral_symbol(k, eps, g) : lattice_symbol(k, eps, g);
  return PeriodizedKernel(g, eps, std::move(sym), k.odd());
}

std::vector<QTensor> convolve_fft(const std::vector<QTensor>& b, const PeriodizedKernel& k) {
  const TorusGrid& g = k.grid();
  if (b.size() != g.size()) throw std::invalid_argument("convolve_fft: field size does not match the grid");
  detail::Fft3 fft(g, 5);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int c = 0; c < 5; ++c) fft.real()[i * 5 + c] = b[i][c];
  fft.forward();
  auto* spec = fft.spectrum();
  for (std::size_t h = 0; h < k.spectrum_size(); ++h) {
    Eigen::Map<Eigen::Matrix<cd, 5, 1>> v(spec + h * 5);
    v = (k.symbol(h) * v).eval();
  }
  fft.backward();
  const double scale = 1.0 / static_cast<double>(g.size());
  std::vector<QTensor> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = QTensor(scale * Eigen::Map<const Vec5>(fft.real() + i * 5));
  return out;
}

std::vector<QTensor> convolve_direct(const std::vector<QTensor>& b, const PeriodizedKernel& k) {
  const TorusGrid& g = k.grid();
  for (int a = 0; a < 3; ++a) {
    if (g.extent(a) > 12) throw std::length_error("convolve_direct: grid extents above 12 are refused");
  }
  if (b.size() != g.size()) throw std::invalid_argument("convolve_direct: field size does not match the grid");
  const std::vector<Mat5> samples = k.real_space();
  const double dv = g.cell_volume();
  std::vector<QTensor> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    const auto cx = g.coords(x);
    Vec5 acc = Vec5::Zero();
    for (std::size_t y = 0; y < g.size(); ++y) {
      const auto cy = g.coords(y);
      const std::size_t d = g.shifted(g.index(0, 0, 0), cx[0] - cy[0], cx[1] - cy[1], cx[2] - cy[2]);
      acc += samples[d] * b[y].coeffs();
    }
    out[x] = QTensor(dv * acc);
  }
  return out;
}

}  // namespace chol
