#pragma once

#include <memory>

#include <Eigen/LU>

#include "emel/fem.hpp"

namespace emel {

/// Sparse LU (UMFPACK) of a complex sparse matrix. Throws SolverError with the
/// UMFPACK status and reciprocal condition estimate when the matrix is
/// singular.
class SparseLU {
public:
  explicit SparseLU(const SparseMatrix &A);
  ~SparseLU();
  SparseLU(const SparseLU &) = delete;
  SparseLU &operator=(const SparseLU &) = delete;

  CVector solve(const CVector &b) const;
  double rcond() const { return rcond_; }

private:
  SparseMatrix A_;
  void *numeric_ = nullptr;
  double rcond_ = 0.0;
};

/// Solver for the coupled operator S + L W P: UMFPACK on the sparse part S
/// and a Woodbury correction for the low-rank Calderon term. One instance
/// factorizes once and serves any number of right-hand sides.
class CoupledSolver {
public:
  explicit CoupledSolver(const CoupledSystem &sys);
  ~CoupledSolver();

  /// Solution with relative residual ||A x - b|| / ||b|| <= tol (iterative
  /// refinement is applied if the direct solve misses it).
  CVector solve(const CVector &b, double *residual = nullptr, double tol = 1e-10) const;

  double rcond() const;

private:
  CVector solve_once(const CVector &b) const;
  const CoupledSystem &sys_;
  std::unique_ptr<SparseLU> lu_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> capacitance_;
  bool has_lowrank_ = false;
};

struct CoupledSolution {
  CVector x;
  double residual = 0.0;
  BlockLayout layout;
  auto u() const { return x.head(layout.n_u); }
  auto H() const { return x.tail(layout.n_H); }
};

CoupledSolution solve(const CoupledSystem &sys, const CVector &rhs);
inline CoupledSolution solve(const CoupledSystem &sys) { return solve(sys, sys.rhs); }

} // namespace emel
