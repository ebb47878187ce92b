#include "trifrac/linear_solver.hpp"

#include <stdexcept>

namespace trifrac {

Eigen::VectorXd SymmetricSolver::solve(const LinearSystem& system) {
  if (!analyzed_) {
    ldlt_.analyzePattern(system.matrix);
    analyzed_ = true;
  }
  ldlt_.factorize(system.matrix);
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error("linear solve failed (" + system.field +
                             "): matrix is not SPD within round-off");
  Eigen::VectorXd x = ldlt_.solve(system.rhs);
  const double bnorm = system.rhs.norm();
  if (bnorm > 0.0) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd r = system.rhs - system.matrix * x;
      if (r.norm() <= 1e-10 * bnorm) break;
      x += ldlt_.solve(r);
    }
  }
  return x;
}

}  // namespace trifrac
