#pragma once

#include <cstdint>
#include <string>

#include "cholesteric/bulk.hpp"
#include "cholesteric/grid.hpp"

namespace chol {

/// Q = s sigma(n), xi = sc sigma(n) with n = (cos m x3, sin m x3, 0).
/// Throws std::domain_error unless 2m is an integer.
QField helical_ansatz(double m, double s, double sc, const TorusGrid& g);

/// Both fields uniaxial along n everywhere.
QField constant_field(double s, double sc, const TorusGrid& g, const Vec3& n = Vec3::UnitX());

/// splitmix64, used for every seeded draw.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [0, 1) from the top 53 bits.
  double uniform();

 private:
  std::uint64_t state_;
};

/// Small random Q and xi: each basis coefficient uniform on [-amplitude, amplitude].
/// With `slab` every x3-slice is uniform across the transverse sites.
QField random_field(const TorusGrid& g, std::uint64_t seed, double amplitude = 0.05, bool slab = true);

struct WavenumberFit {
  double m = 0.0;
  double residual = 0.0;  // RMS misfit of the unwrapped angle, radians
  bool degraded = false;  // a slice director left the e1e2-plane or was ill-defined
};

/// Least-squares twist rate of the slice-averaged director along x3.
WavenumberFit extract_wavenumber(const QField& f, double plane_threshold = 0.1);

struct FieldMetadata {
  double eps = 0.0;
  ModelParams params;
};

/// Writes PREFIX.json (grid, eps, params, component order) and PREFIX.bin
/// (little-endian float64, x1 slowest, 5 Q then 5 xi per site).
void write_field(const std::string& prefix, const QField& f, const FieldMetadata& meta);
QField read_field(const std::string& prefix, FieldMetadata* meta = nullptr);

}  // namespace chol
