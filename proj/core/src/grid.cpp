#include "cholesteric/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chol {

TorusGrid::TorusGrid(int n1, int n2, int n3) : n_{n1, n2, n3} {
  for (int a = 0; a < 3; ++a) {
    if (n_[a] < 4 || n_[a] % 2 != 0) {
      throw std::invalid_argument("TorusGrid: extent " + std::to_string(n_[a]) + " must be even and >= 4");
    }
  }
}

double TorusGrid::spacing(int axis) const { return 2.0 * std::numbers::pi / n_[axis]; }

double TorusGrid::cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

std::size_t TorusGrid::index(int i, int j, int k) const {
  return (static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k;
}

std::array<int, 3> TorusGrid::coords(std::size_t idx) const {
  const int k = static_cast<int>(idx % n_[2]);
  idx /= n_[2];
  const int j = static_cast<int>(idx % n_[1]);
  const int i = static_cast<int>(idx / n_[1]);
  return {i, j, k};
}

Vec3 TorusGrid::position(std::size_t idx) const {
  const auto c = coords(idx);
  return {c[0] * spacing(0), c[1] * spacing(1), c[2] * spacing(2)};
}

std::size_t TorusGrid::shifted(std::size_t idx, int d1, int d2, int d3) const {
  auto c = coords(idx);
  const int d[3] = {d1, d2, d3};
  for (int a = 0; a < 3; ++a) c[a] = ((c[a] + d[a]) % n_[a] + n_[a]) % n_[a];
  return index(c[0], c[1], c[2]);
}

bool QField::physical(double margin) const {
  for (std::size_t i = 0; i < Q.size(); ++i) {
    if (!is_physical(Q[i], margin) || !is_physical(xi[i], margin)) return false;
  }
  return true;
}

QField QField::shifted(int d1, int d2, int d3) const {
  QField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = grid.shifted(i, d1, d2, d3);
    out.Q[j] = Q[i];
    out.xi[j] = xi[i];
  }
  return out;
}

double grid_l2(const TorusGrid& g, const std::vector<QTensor>& a) {
  double s = 0.0;
  for (const auto& q : a) s += q.coeffs().squaredNorm();
  return std::sqrt(s * g.cell_volume());
}

}  // namespace chol
