#include "trifrac/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace trifrac {

void EmbeddingMesh::validate() const {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("mesh: element counts must be >= 1");
  if (hx <= 0.0 || hy <= 0.0)
    throw std::invalid_argument("mesh: element sizes must be positive");
  if (degree < kMinDegree || degree > kMaxDegree)
    throw std::invalid_argument("mesh: degree must be in [1, 4]");
}

int EmbeddingMesh::element_of(const Vec2& x) const {
  const Vec2 rel = x - origin;
  int i = static_cast<int>(std::floor(rel.x() / hx));
  int j = static_cast<int>(std::floor(rel.y() / hy));
  i = std::clamp(i, 0, nx - 1);
  j = std::clamp(j, 0, ny - 1);
  return element_index(i, j);
}

namespace {

// 1D numbering for n elements of degree p: vertices 0..n first, then the
// p-1 bubbles of each element. Shared vertices get one index, which is what
// makes the tensor-product 2D numbering C0 across edges.
int dof_1d(int n, int p, int elem, int a) {
  if (a == 0) return elem;
  if (a == 1) return elem + 1;
  return (n + 1) + elem * (p - 1) + (a - 2);
}

int count_1d(int n, int p) { return n * p + 1; }

}  // namespace

DofMap::DofMap(const EmbeddingMesh& mesh) {
  mesh.validate();
  const int p = mesh.degree;
  const int n1 = basis_count_1d(p);
  nb_ = n1 * n1;
  const int ny1d = count_1d(mesh.ny, p);
  scalar_count_ = count_1d(mesh.nx, p) * ny1d;
  element_dofs_.resize(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const int i = e % mesh.nx, j = e / mesh.nx;
    Eigen::VectorXi dofs(nb_);
    for (int a = 0; a < n1; ++a) {
      const int gx = dof_1d(mesh.nx, p, i, a);
      for (int b = 0; b < n1; ++b) {
        const int gy = dof_1d(mesh.ny, p, j, b);
        dofs[a * n1 + b] = gx * ny1d + gy;
      }
    }
    element_dofs_[e] = std::move(dofs);
  }
}

}  // namespace trifrac
