#include <doctest.h>

#include <cmath>

#include "trifrac/basis.hpp"

using namespace trifrac;

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (int n = 1; n <= 8; ++n) {
    const QuadratureRule rule = gauss_legendre(n);
    CHECK(rule.points.size() == n);
    CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    // exact through degree 2n-1: check x^(2n-2) and the vanishing odd power
    double even = 0.0, odd = 0.0;
    for (int i = 0; i < n; ++i) {
      even += rule.weights[i] * std::pow(rule.points[i], 2 * n - 2);
      odd += rule.weights[i] * std::pow(rule.points[i], 2 * n - 1);
    }
    CHECK(even == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
    CHECK(odd == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("linear part is a partition of unity") {
  Eigen::VectorXd v(5), d(5);
  shape_basis(1, 0.0, v.head(2), d.head(2));
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(0.5));
  for (int p = 1; p <= 4; ++p)
    for (double xi : {-0.9, -0.3, 0.0, 0.7, 1.0}) {
      shape_basis(p, xi, v.head(p + 1), d.head(p + 1));
      CHECK(v[0] + v[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("bubbles vanish at the vertices") {
  Eigen::VectorXd v(5), d(5);
  for (int p = 2; p <= 4; ++p)
    for (double xi : {-1.0, 1.0}) {
      shape_basis(p, xi, v.head(p + 1), d.head(p + 1));
      for (int k = 2; k <= p; ++k) CHECK(v[k] == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("derivatives match finite differences") {
  Eigen::VectorXd lo(5), hi(5), d(5), scratch(5);
  const double h = 1e-6;
  for (int p = 1; p <= 4; ++p)
    for (double xi : {-0.77, -0.2, 0.33, 0.9}) {
      shape_basis(p, xi, scratch.head(p + 1), d.head(p + 1));
      shape_basis(p, xi - h, lo.head(p + 1), scratch.head(p + 1));
      shape_basis(p, xi + h, hi.head(p + 1), scratch.head(p + 1));
      for (int k = 0; k <= p; ++k)
        CHECK(d[k] == doctest::Approx((hi[k] - lo[k]) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("degree range is enforced") {
  Eigen::VectorXd v(9), d(9);
  CHECK_THROWS(shape_basis(0, 0.0, v, d));
  CHECK_THROWS(shape_basis(5, 0.0, v, d));
}

TEST_CASE("tensor basis is the 1d product") {
  const Vec2 xi(0.3, -0.6);
  for (int p = 1; p <= 4; ++p) {
    const TensorBasis basis = tensor_basis(p, xi);
    Eigen::VectorXd nx(p + 1), dx(p + 1), ny(p + 1), dy(p + 1);
    shape_basis(p, xi.x(), nx, dx);
    shape_basis(p, xi.y(), ny, dy);
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= p; ++b) {
        const int l = a * (p + 1) + b;
        CHECK(basis.values[l] == doctest::Approx(nx[a] * ny[b]).epsilon(1e-14));
        CHECK(basis.grads(l, 0) == doctest::Approx(dx[a] * ny[b]).epsilon(1e-14));
        CHECK(basis.grads(l, 1) == doctest::Approx(nx[a] * dy[b]).epsilon(1e-14));
      }
    double corner_sum = 0.0;
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b) corner_sum += basis.values[a * (p + 1) + b];
    CHECK(corner_sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}
