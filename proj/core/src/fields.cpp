#include "cholesteric/fields.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chol {

QField helical_ansatz(double m, double s, double sc, const TorusGrid& g) {
  if (std::abs(2.0 * m - std::round(2.0 * m)) > 1e-12) {
    throw std::domain_error("helical_ansatz: m must be a multiple of 1/2");
  }
  QField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x3 = g.position(i)[2];
    const QTensor sg = sigma(Vec3(std::cos(m * x3), std::sin(m * x3), 0.0));
    f.Q[i] = s * sg;
    f.xi[i] = sc * sg;
  }
  return f;
}

QField constant_field(double s, double sc, const TorusGrid& g, const Vec3& n) {
  QField f(g);
  const QTensor sg = sigma(n.normalized());
  for (std::size_t i = 0; i < g.size(); ++i) {
    f.Q[i] = s * sg;
    f.xi[i] = sc * sg;
  }
  return f;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

QField random_field(const TorusGrid& g, std::uint64_t seed, double amplitude, bool slab) {
  SplitMix64 rng(seed);
  auto draw = [&] {
    Vec5 c;
    for (int k = 0; k < 5; ++k) c[k] = amplitude * (2.0 * rng.uniform() - 1.0);
    return QTensor(c);
  };
  QField f(g);
  if (slab) {
    for (int k = 0; k < g.extent(2); ++k) {
      const QTensor q = draw(), x = draw();
      for (int i = 0; i < g.extent(0); ++i)
        for (int j = 0; j < g.extent(1); ++j) {
          f.Q[g.index(i, j, k)] = q;
          f.xi[g.index(i, j, k)] = x;
        }
    }
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      f.Q[i] = draw();
      f.xi[i] = draw();
    }
  }
  return f;
}

WavenumberFit extract_wavenumber(const QField& f, double plane_threshold) {
  const TorusGrid& g = f.grid;
  const int n3 = g.extent(2);
  const std::size_t per_slice = static_cast<std::size_t>(g.extent(0)) * g.extent(1);
  WavenumberFit fit;
  std::vector<double> angle(n3);
  for (int k = 0; k < n3; ++k) {
    Vec5 mean = Vec5::Zero();
    for (int i = 0; i < g.extent(0); ++i)
      for (int j = 0; j < g.extent(1); ++j) mean += f.Q[g.index(i, j, k)].coeffs();
    const QTensor q(mean / static_cast<double>(per_slice));
    if (q.norm() < 1e-12) {
      fit.degraded = true;
      angle[k] = 0.0;
      continue;
    }
    const UniaxialState u = uniaxial_project(q, 1e-3);
    if (std::abs(u.n[2]) > plane_threshold || u.s <= 0.0) fit.degraded = true;
    // Twice the in-plane angle is sign-free for a director.
    angle[k] = std::atan2(2.0 * u.n[0] * u.n[1], u.n[0] * u.n[0] - u.n[1] * u.n[1]);
  }
  for (int k = 1; k < n3; ++k) {
    double d = angle[k] - angle[k - 1];
    d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
    angle[k] = angle[k - 1] + d;
  }
  const double h = g.spacing(2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n3; ++k) {
    const double x = k * h;
    sx += x;
    sy += angle[k];
    sxx += x * x;
    sxy += x * angle[k];
  }
  const double slope = (n3 * sxy - sx * sy) / (n3 * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n3;
  double rss = 0;
  for (int k = 0; k < n3; ++k) {
    const double r = angle[k] - icpt - slope * k * h;
    rss += r * r;
  }
  fit.m = 0.5 * slope;
  fit.residual = std::sqrt(rss / n3);
  return fit;
}

namespace {

const char* const kComponents[10] = {"Q0", "Q1", "Q2", "Q3", "Q4", "xi0", "xi1", "xi2", "xi3", "xi4"};

}  // namespace

void write_field(const std::string& prefix, const QField& f, const FieldMetadata& meta) {
  nlohmann::json j;
  j["grid"] = f.grid.extents();
  j["eps"] = meta.eps;
  j["params"] = {{"tau", meta.params.tau},
                 {"alpha", meta.params.alpha},
                 {"rho0", meta.params.rho0},
                 {"eps", meta.params.eps},
                 {"kDD0", meta.params.kDD0}};
  j["component_order"] = std::vector<std::string>(std::begin(kComponents), std::end(kComponents));
  j["basis"] = {"(e1e1-e2e2)/sqrt2", "(e1e2+e2e1)/sqrt2", "(e1e3+e3e1)/sqrt2", "(e2e3+e3e2)/sqrt2",
                "(2e3e3-e1e1-e2e2)/sqrt6"};
  j["layout"] = "row-major, x1 slowest, 10 little-endian float64 per site";
  std::ofstream js(prefix + ".json");
  if (!js) throw std::runtime_error("cannot write " + prefix + ".json");
  js << j.dump(2) << "\n";

  std::ofstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + prefix + ".bin");
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const auto q = f.Q[i].to_bytes();
    const auto x = f.xi[i].to_bytes();
    bin.write(reinterpret_cast<const char*>(q.data()), q.size());
    bin.write(reinterpret_cast<const char*>(x.data()), x.size());
  }
  if (!bin) throw std::runtime_error("write failed for " + prefix + ".bin");
}

QField read_field(const std::string& prefix, FieldMetadata* meta) {
  std::ifstream js(prefix + ".json");
  if (!js) throw std::runtime_error("cannot read " + prefix + ".json");
  const nlohmann::json j = nlohmann::json::parse(js);
  const auto n = j.at("grid").get<std::array<int, 3>>();
  QField f(TorusGrid(n[0], n[1], n[2]));
  if (meta) {
    meta->eps = j.at("eps").get<double>();
    const auto& p = j.at("params");
    meta->params.tau = p.at("tau").get<double>();
    meta->params.alpha = p.at("alpha").get<double>();
    meta->params.rho0 = p.at("rho0").get<double>();
    meta->params.eps = p.at("eps").get<double>();
    meta->params.kDD0 = p.at("kDD0").get<double>();
  }
  std::ifstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot read " + prefix + ".bin");
  std::array<std::uint8_t, 40> buf;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    bin.read(reinterpret_cast<char*>(buf.data()), buf.size());
    f.Q[i] = QTensor::from_bytes(buf);
    bin.read(reinterpret_cast<char*>(buf.data()), buf.size());
    f.xi[i] = QTensor::from_bytes(buf);
  }
  if (!bin) throw std::runtime_error(prefix + ".bin is truncated");
  return f;
}

}  // namespace chol
