#pragma once

#include <vector>

#include <Eigen/Dense>

#include "trifrac/basis.hpp"
#include "trifrac/types.hpp"

namespace trifrac {

/// Cartesian embedding mesh: nx x ny axis-aligned elements of uniform size,
/// a single polynomial degree shared by all fields.
struct EmbeddingMesh {
  Vec2 origin = Vec2::Zero();
  int nx = 1, ny = 1;
  double hx = 1.0, hy = 1.0;
  int degree = 1;

  void validate() const;

  int element_count() const { return nx * ny; }
  int element_index(int i, int j) const { return j * nx + i; }
  Box2 box() const {
    return Box2(origin, origin + Vec2(nx * hx, ny * hy));
  }
  Box2 element_box(int e) const {
    const int i = e % nx, j = e / nx;
    const Vec2 lo = origin + Vec2(i * hx, j * hy);
    return Box2(lo, lo + Vec2(hx, hy));
  }
  /// Element containing x (clamped to the mesh at the boundary).
  int element_of(const Vec2& x) const;
  /// Reference coordinates of x within element e.
  Vec2 to_reference(int e, const Vec2& x) const {
    const Box2 b = element_box(e);
    return Vec2(2.0 * (x.x() - b.min().x()) / hx - 1.0,
                2.0 * (x.y() - b.min().y()) / hy - 1.0);
  }
  Vec2 from_reference(int e, const Vec2& xi) const {
    const Box2 b = element_box(e);
    return Vec2(b.min().x() + 0.5 * (xi.x() + 1.0) * hx,
                b.min().y() + 0.5 * (xi.y() + 1.0) * hy);
  }
  double jacobian() const { return 0.25 * hx * hy; }
};

/// C0 tensor-product dof numbering. Scalar fields share one numbering; the
/// displacement field interleaves its two components on top of it
/// (dof = 2 * scalar + component). Fields are assembled independently, so
/// their index spaces never mix.
class DofMap {
 public:
  explicit DofMap(const EmbeddingMesh& mesh);

  int scalar_count() const { return scalar_count_; }
  int vector_count() const { return 2 * scalar_count_; }
  int functions_per_element() const { return nb_; }

  const Eigen::VectorXi& element_scalar_dofs(int e) const {
    return element_dofs_[e];
  }
  static int vector_dof(int scalar_dof, int comp) {
    return 2 * scalar_dof + comp;
  }

 private:
  int nb_ = 0;
  int scalar_count_ = 0;
  std::vector<Eigen::VectorXi> element_dofs_;
};

}  // namespace trifrac
