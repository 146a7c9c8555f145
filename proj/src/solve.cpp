#include "emel/solve.hpp"

#include <cmath>
#include <sstream>

#include <umfpack.h>

namespace emel {
namespace {

const double *packed(const Complex *p) { return reinterpret_cast<const double *>(p); }
double *packed(Complex *p) { return reinterpret_cast<double *>(p); }

} // namespace

SparseLU::SparseLU(const SparseMatrix &A) : A_(A) {
  A_.makeCompressed();
  const int n = static_cast<int>(A_.rows());
  if (A_.rows() != A_.cols())
    throw SolverError("sparse LU requires a square matrix");
  double control[UMFPACK_CONTROL], info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  void *symbolic = nullptr;
  int status = umfpack_zi_symbolic(n, n, A_.outerIndexPtr(), A_.innerIndexPtr(),
                                   packed(A_.valuePtr()), nullptr, &symbolic, control, info);
  if (status != UMFPACK_OK) {
    umfpack_zi_free_symbolic(&symbolic);
    throw SolverError("UMFPACK symbolic analysis failed with status " + std::to_string(status));
  }
  status = umfpack_zi_numeric(A_.outerIndexPtr(), A_.innerIndexPtr(), packed(A_.valuePtr()),
                              nullptr, symbolic, &numeric_, control, info);
  umfpack_zi_free_symbolic(&symbolic);
  rcond_ = info[UMFPACK_RCOND];
  if (status != UMFPACK_OK) {
    std::ostringstream os;
    os << "sparse factorization failed (UMFPACK status " << status
       << ", reciprocal condition estimate " << rcond_
       << "): the system is singular; check for a resonant frequency or a degenerate mesh";
    if (numeric_)
      umfpack_zi_free_numeric(&numeric_);
    throw SolverError(os.str());
  }
}

SparseLU::~SparseLU() {
  if (numeric_)
    umfpack_zi_free_numeric(&numeric_);
}

CVector SparseLU::solve(const CVector &b) const {
  CVector x(b.size());
  double control[UMFPACK_CONTROL], info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  const int status =
      umfpack_zi_solve(UMFPACK_A, A_.outerIndexPtr(), A_.innerIndexPtr(), packed(A_.valuePtr()),
                       nullptr, packed(x.data()), nullptr, packed(b.data()), nullptr, numeric_,
                       control, info);
  if (status != UMFPACK_OK)
    throw SolverError("UMFPACK solve failed with status " + std::to_string(status));
  return x;
}

CoupledSolver::CoupledSolver(const CoupledSystem &sys) : sys_(sys) {
  lu_ = std::make_unique<SparseLU>(sys.A);
  const auto &t = sys.dtn;
  if (t.empty())
    return;
  has_lowrank_ = true;
  const Eigen::Index m = static_cast<Eigen::Index>(t.dofs.size());
  const Eigen::Index r = t.W.rows();
  // capacitance I + W P S^{-1} L, one sparse solve per column of L
  Eigen::MatrixXcd PZ(r, r);
  CVector col = CVector::Zero(sys.layout.size());
  for (Eigen::Index k = 0; k < r; ++k) {
    for (Eigen::Index i = 0; i < m; ++i)
      col(t.dofs[static_cast<std::size_t>(i)]) = t.L(i, k);
    const CVector z = lu_->solve(col);
    CVector zs(m);
    for (Eigen::Index i = 0; i < m; ++i)
      zs(i) = z(t.dofs[static_cast<std::size_t>(i)]);
    PZ.col(k) = t.P * zs;
    for (Eigen::Index i = 0; i < m; ++i)
      col(t.dofs[static_cast<std::size_t>(i)]) = 0.0;
  }
  const Eigen::MatrixXcd cap = Eigen::MatrixXcd::Identity(r, r) + t.W * PZ;
  capacitance_.compute(cap);
}

CoupledSolver::~CoupledSolver() = default;

double CoupledSolver::rcond() const { return lu_->rcond(); }

CVector CoupledSolver::solve_once(const CVector &b) const {
  CVector y = lu_->solve(b);
  if (!has_lowrank_)
    return y;
  const auto &t = sys_.dtn;
  const Eigen::Index m = static_cast<Eigen::Index>(t.dofs.size());
  CVector ys(m);
  for (Eigen::Index i = 0; i < m; ++i)
    ys(i) = y(t.dofs[static_cast<std::size_t>(i)]);
  const CVector tt = capacitance_.solve(t.W * (t.P * ys));
  const CVector Lt = t.L * tt;
  CVector b2 = b;
  for (Eigen::Index i = 0; i < m; ++i)
    b2(t.dofs[static_cast<std::size_t>(i)]) -= Lt(i);
  return lu_->solve(b2);
}

CVector CoupledSolver::solve(const CVector &b, double *residual, double tol) const {
  const double bn = b.norm();
  if (bn == 0.0) {
    if (residual)
      *residual = 0.0;
    return CVector::Zero(b.size());
  }
  CVector x = solve_once(b);
  CVector r = b - sys_.apply(x);
  double rel = r.norm() / bn;
  for (int it = 0; it < 5 && rel > tol; ++it) {
    x += solve_once(r);
    r = b - sys_.apply(x);
    rel = r.norm() / bn;
  }
  if (residual)
    *residual = rel;
  if (!(rel <= tol)) {
    std::ostringstream os;
    os << "coupled solve residual " << rel << " exceeds " << tol
       << " (reciprocal condition estimate of the sparse part " << rcond() << ")";
    throw SolverError(os.str());
  }
  return x;
}

CoupledSolution solve(const CoupledSystem &sys, const CVector &rhs) {
  CoupledSolver solver(sys);
  CoupledSolution s;
  s.layout = sys.layout;
  s.x = solver.solve(rhs, &s.residual);
  return s;
}

} // namespace emel
