#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "trifrac/types.hpp"

namespace trifrac {

/// Full parameter set of the three-field model in consistent kN-mm units
/// (moduli and strengths in kN/mm^2, fracture energies in kN/mm,
/// length scales in mm).
struct MaterialCard {
  double youngs = 0.0;
  double poisson = 0.0;
  double lambda = 0.0;  // derived from (youngs, poisson)
  double mu = 0.0;
  double gc1 = 0.0;  // mode I critical energy release rate
  double gc2 = 0.0;  // mode II
  double l01 = 0.0;  // mode I length scale
  double l02 = 0.0;  // mode II
  double eta = 1e-6;
  double sigma_t = 0.0;  // tensile strength (0 if not recorded)
  double tau = 0.0;      // shear strength (0 if not recorded)

  static MaterialCard make(double youngs, double poisson, double gc1,
                           double gc2, double l01, double l02,
                           double eta = 1e-6, double sigma_t = 0.0,
                           double tau = 0.0);
  /// Named presets "spk" (Solnhofen Limestone) and "pfd" (Pfraundorfer
  /// Dolostone). Note: the shipped spk l01 = 0.259 mm is the literature
  /// value; the strength formula with the same card gives 0.229 mm.
  static MaterialCard preset(std::string_view name);

  void validate() const;
};

/// Per-quadrature-point history pair; both entries are non-decreasing over
/// a simulation.
struct QuadPointState {
  double h1 = 0.0;  // mode I driving-force history, kN/mm^2
  double h2 = 0.0;  // mode II
};

template <typename Scalar>
Matrix2<Scalar> small_strain(const Matrix2<Scalar>& grad_u) {
  return Scalar(0.5) * (grad_u + grad_u.transpose());
}

template <typename Scalar>
Scalar macaulay(Scalar x) {
  return x > Scalar(0) ? x : Scalar(0);
}

/// Positive part of a symmetric 2x2 tensor via the closed-form spectral
/// split. For (near-)repeated eigenvalues any orthonormal eigenbasis gives
/// the same result, so the isotropic branch is exact there.
template <typename Scalar>
Matrix2<Scalar> spectral_positive(const Matrix2<Scalar>& eps) {
  const Scalar a = eps(0, 0), d = eps(1, 1);
  const Scalar b = Scalar(0.5) * (eps(0, 1) + eps(1, 0));
  const Scalar mean = Scalar(0.5) * (a + d);
  const Scalar r = std::sqrt(Scalar(0.25) * (a - d) * (a - d) + b * b);
  const Scalar l1 = mean + r, l2 = mean - r;
  if (r <= Scalar(1e-14) * (std::abs(l1) + std::abs(l2)) || r == Scalar(0))
    return macaulay(mean) * Matrix2<Scalar>::Identity();
  // Eigenvector for l1; pick the larger column for conditioning.
  Vector2<Scalar> v1;
  if (std::abs(l1 - d) > std::abs(l1 - a))
    v1 << l1 - d, b;
  else
    v1 << b, l1 - a;
  v1.normalize();
  const Vector2<Scalar> v2(-v1.y(), v1.x());
  return macaulay(l1) * v1 * v1.transpose() +
         macaulay(l2) * v2 * v2.transpose();
}

/// Instantaneous mode I / mode II crack driving forces
/// (psi1, psi2) = (lambda/2 <tr eps>+^2, mu tr(eps+^2)).
template <typename Scalar>
std::pair<Scalar, Scalar> driving_forces(const Matrix2<Scalar>& eps,
                                         Scalar lambda, Scalar mu) {
  const Scalar tr_pos = macaulay(eps.trace());
  const Matrix2<Scalar> ep = spectral_positive(eps);
  return {Scalar(0.5) * lambda * tr_pos * tr_pos,
          mu * (ep * ep).trace()};
}

/// Stiffness degradation g = (1 - eta) min(s1, s2)^2 + eta; inputs are
/// clamped to [0, 1] so g stays in [eta, 1].
template <typename Scalar>
Scalar degradation(Scalar s1, Scalar s2, Scalar eta) {
  const Scalar s = std::clamp(std::min(s1, s2), Scalar(0), Scalar(1));
  return (Scalar(1) - eta) * s * s + eta;
}

/// Hybrid-formulation stress: the full tensor is degraded, no split.
template <typename Scalar>
Matrix2<Scalar> stress(const Matrix2<Scalar>& eps, Scalar g, Scalar lambda,
                       Scalar mu) {
  return g * (lambda * eps.trace() * Matrix2<Scalar>::Identity() +
              Scalar(2) * mu * eps);
}

/// Undegraded elastic strain energy density (plane strain).
template <typename Scalar>
Scalar strain_energy(const Matrix2<Scalar>& eps, Scalar lambda, Scalar mu) {
  const Scalar tr = eps.trace();
  return Scalar(0.5) * lambda * tr * tr + mu * (eps * eps).trace();
}

/// Mode-gated irreversible history update. Which mode a point is in is
/// judged on the instantaneous forces; an established crack (s < 0.5) keeps
/// its own history active. Both guards read the pre-update state and both
/// may fire.
inline void update_history(QuadPointState& state, double psi1, double psi2,
                           double s1, double s2) {
  const bool mode1 = psi1 >= psi2 || s1 < 0.5;
  const bool mode2 = psi1 < psi2 || s2 < 0.5;
  if (mode1) state.h1 = std::max(state.h1, psi1);
  if (mode2) state.h2 = std::max(state.h2, psi2);
}

}  // namespace trifrac
