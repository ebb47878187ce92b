#pragma once

#include <Eigen/Dense>

#include "trifrac/types.hpp"

namespace trifrac {

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 4;

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};

QuadratureRule gauss_legendre(int n);

/// 1D hierarchic basis of degree p on [-1, 1]: the two linear vertex
/// functions followed by the p-1 integrated Legendre bubbles, which vanish
/// at both endpoints. Fills `values` and `derivatives` (size p+1 each).
void shape_basis(int p, double xi, Eigen::Ref<Eigen::VectorXd> values,
                 Eigen::Ref<Eigen::VectorXd> derivatives);

inline int basis_count_1d(int p) { return p + 1; }
inline int basis_count_2d(int p) { return (p + 1) * (p + 1); }

/// Tensor-product basis at a reference point. Local function a*(p+1)+b is
/// N_a(xi) * N_b(eta); gradients are with respect to reference coordinates.
struct TensorBasis {
  Eigen::VectorXd values;                          // (p+1)^2
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads;  // (p+1)^2 x 2
};

TensorBasis tensor_basis(int p, const Vec2& xi);

}  // namespace trifrac
