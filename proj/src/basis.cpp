#include "trifrac/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace trifrac {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton iteration from the Chebyshev initial guess; nodes are roots of P_n.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

namespace {

// Legendre values P_0..P_n at xi.
void legendre_values(int n, double xi, Eigen::Ref<Eigen::VectorXd> p) {
  p[0] = 1.0;
  if (n >= 1) p[1] = xi;
  for (int k = 2; k <= n; ++k)
    p[k] = ((2 * k - 1) * xi * p[k - 1] - (k - 1) * p[k - 2]) / k;
}

}  // namespace

void shape_basis(int p, double xi, Eigen::Ref<Eigen::VectorXd> values,
                 Eigen::Ref<Eigen::VectorXd> derivatives) {
  if (p < kMinDegree || p > kMaxDegree)
    throw std::invalid_argument("shape_basis: degree must be in [1, 4]");
  values[0] = 0.5 * (1.0 - xi);
  values[1] = 0.5 * (1.0 + xi);
  derivatives[0] = -0.5;
  derivatives[1] = 0.5;
  if (p >= 2) {
    Eigen::VectorXd leg(p + 1);
    legendre_values(p, xi, leg);
    for (int k = 2; k <= p; ++k) {
      // N_k = (P_k - P_{k-2}) / sqrt(2(2k-1)), N_k' = sqrt((2k-1)/2) P_{k-1}
      const double scale = std::sqrt(2.0 * (2 * k - 1));
      values[k] = (leg[k] - leg[k - 2]) / scale;
      derivatives[k] = std::sqrt((2 * k - 1) / 2.0) * leg[k - 1];
    }
  }
}

TensorBasis tensor_basis(int p, const Vec2& xi) {
  const int n1 = basis_count_1d(p);
  Eigen::VectorXd nx(n1), dnx(n1), ny(n1), dny(n1);
  shape_basis(p, xi.x(), nx, dnx);
  shape_basis(p, xi.y(), ny, dny);
  TensorBasis basis;
  basis.values.resize(n1 * n1);
  basis.grads.resize(n1 * n1, 2);
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n1; ++b) {
      const int l = a * n1 + b;
      basis.values[l] = nx[a] * ny[b];
      basis.grads(l, 0) = dnx[a] * ny[b];
      basis.grads(l, 1) = nx[a] * dny[b];
    }
  }
  return basis;
}

}  // namespace trifrac
