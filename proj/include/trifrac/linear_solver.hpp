#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "trifrac/assembly.hpp"

namespace trifrac {

/// Sparse symmetric factorization with pattern reuse across repeated solves
/// of same-structure systems. Applies iterative refinement until the
/// relative residual is below 1e-10 (or machine-limited).
class SymmetricSolver {
 public:
  Eigen::VectorXd solve(const LinearSystem& system);

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt_;
  bool analyzed_ = false;
};

}  // namespace trifrac
