#include "trifrac/material.hpp"

#include <stdexcept>
#include <string>

namespace trifrac {

MaterialCard MaterialCard::make(double youngs, double poisson, double gc1,
                                double gc2, double l01, double l02, double eta,
                                double sigma_t, double tau) {
  MaterialCard card;
  card.youngs = youngs;
  card.poisson = poisson;
  card.lambda = youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  card.mu = youngs / (2.0 * (1.0 + poisson));
  card.gc1 = gc1;
  card.gc2 = gc2;
  card.l01 = l01;
  card.l02 = l02;
  card.eta = eta;
  card.sigma_t = sigma_t;
  card.tau = tau;
  card.validate();
  return card;
}

MaterialCard MaterialCard::preset(std::string_view name) {
  if (name == "spk" || name == "SPK")
    return make(45.8, 0.31, 1.97e-5, 4.98e-4, 0.259, 0.682, 1e-6, 14.4e-3,
                41.85e-3);
  if (name == "pfd" || name == "PFD")
    return make(52.5, 0.27, 3.928e-5, 3.0366e-4, 0.916, 0.656, 1e-6, 10.9e-3,
                35.75e-3);
  throw std::invalid_argument("unknown material preset: " + std::string(name));
}

void MaterialCard::validate() const {
  if (youngs <= 0.0) throw std::invalid_argument("material: E must be positive");
  if (poisson <= -1.0 || poisson >= 0.5)
    throw std::invalid_argument("material: nu must be in (-1, 0.5)");
  if (gc1 <= 0.0 || gc2 <= 0.0)
    throw std::invalid_argument("material: fracture energies must be positive");
  if (l01 <= 0.0 || l02 <= 0.0)
    throw std::invalid_argument("material: length scales must be positive");
  if (eta <= 0.0 || eta >= 0.1)
    throw std::invalid_argument("material: eta must be small and positive");
}

}  // namespace trifrac
