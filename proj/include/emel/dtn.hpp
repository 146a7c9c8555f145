#pragma once

#include <vector>

#include <Eigen/Core>

#include "emel/types.hpp"

namespace emel {

/// Tangential field on S_R expanded as
///   lambda(x) = sum_{n,m} (a_nm U_n^m(xhat) + b_nm V_n^m(xhat)) / R,
/// i.e. in the basis (U/R, V/R) that is orthonormal in L2(S_R). Coefficients
/// are stored by mode_index(n, m).
struct SphericalTraceExpansion {
  int order = 0;
  CVector a, b;

  static SphericalTraceExpansion zero(int N);
  CVec3 evaluate(const Vec3 &x, double R) const;
};

/// Project samples of a tangential field on S_R (points, weights) onto the
/// harmonic basis up to order N. Throws when a sample is not tangential.
SphericalTraceExpansion project_trace(const std::vector<Vec3> &points,
                                      const std::vector<double> &weights,
                                      const std::vector<CVec3> &samples, double R, int N);

/// Calderon map G_e(lambda) = (1/ik) xhat x curl w on S_R, where w radiates
/// (decays for k = i) and xhat x w = lambda. It is diagonal in the modes:
///   G_e U = -i rho_n V,   G_e V = -(i / rho_n) U,
/// with rho_n = xi_n'(kR) / xi_n(kR) and xi_n(t) = t h_n(t).
class DtNOperator {
public:
  DtNOperator(Complex kappa, double R, int N, std::vector<Complex> rho);

  Complex kappa() const { return kappa_; }
  double radius() const { return R_; }
  int order() const { return N_; }
  Complex rho(int n) const { return rho_[static_cast<std::size_t>(n)]; }

  /// 2x2 multiplier acting on (a_nm, b_nm).
  Eigen::Matrix2cd multiplier(int n) const;

private:
  Complex kappa_;
  double R_;
  int N_;
  std::vector<Complex> rho_; // index 1..N
};

DtNOperator build_calderon(Complex kappa, double R, int N);

SphericalTraceExpansion apply_dtn(const DtNOperator &op, const SphericalTraceExpansion &lam);

} // namespace emel
