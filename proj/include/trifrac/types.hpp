#pragma once

#include <Eigen/Dense>

namespace trifrac {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Box2 = Eigen::AlignedBox2d;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

}  // namespace trifrac
