#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cholesteric/qtensor.hpp"

namespace chol {

/// Periodic grid on the torus [0, 2pi)^3, row-major with x1 slowest.
class TorusGrid {
 public:
  /// Throws std::invalid_argument unless every extent is even and >= 4.
  TorusGrid(int n1, int n2, int n3);
  explicit TorusGrid(int n) : TorusGrid(n, n, n) {}
  /// Thin geometry: 4 x 4 x n3.
  static TorusGrid thin(int n3) { return TorusGrid(4, 4, n3); }

  int extent(int axis) const { return n_[axis]; }
  const std::array<int, 3>& extents() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]; }
  double spacing(int axis) const;
  double cell_volume() const;

  std::size_t index(int i, int j, int k) const;
  std::array<int, 3> coords(std::size_t idx) const;
  Vec3 position(std::size_t idx) const;
  /// Index of site idx shifted by (d1, d2, d3) with periodic wrap.
  std::size_t shifted(std::size_t idx, int d1, int d2, int d3) const;

  bool operator==(const TorusGrid& o) const { return n_ == o.n_; }

 private:
  std::array<int, 3> n_;
};

/// Host order Q and dopant order xi on a grid.
struct QField {
  TorusGrid grid;
  std::vector<QTensor> Q;
  std::vector<QTensor> xi;

  explicit QField(const TorusGrid& g) : grid(g), Q(g.size()), xi(g.size()) {}

  /// True iff every site of both fields satisfies is_physical(., margin).
  bool physical(double margin = 0.0) const;
  /// Cyclic shift of both fields by whole sites.
  QField shifted(int d1, int d2, int d3) const;
};

/// sqrt(sum_x h^3 |A(x)|^2).
double grid_l2(const TorusGrid& g, const std::vector<QTensor>& a);

}  // namespace chol
