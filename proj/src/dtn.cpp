#include "emel/dtn.hpp"

#include <cmath>

#include "emel/kernels.hpp"

namespace emel {

SphericalTraceExpansion SphericalTraceExpansion::zero(int N) {
  SphericalTraceExpansion e;
  e.order = N;
  e.a = CVector::Zero(mode_count(N));
  e.b = CVector::Zero(mode_count(N));
  return e;
}

CVec3 SphericalTraceExpansion::evaluate(const Vec3 &x, double R) const {
  std::vector<CVec3> U, V;
  vector_spherical_harmonics_all(order, x.normalized(), U, V);
  CVec3 s = CVec3::Zero();
  for (int k = 0; k < mode_count(order); ++k)
    s += a(k) * U[static_cast<std::size_t>(k)] + b(k) * V[static_cast<std::size_t>(k)];
  return s / R;
}

SphericalTraceExpansion project_trace(const std::vector<Vec3> &points,
                                      const std::vector<double> &weights,
                                      const std::vector<CVec3> &samples, double R, int N) {
  if (points.size() != weights.size() || points.size() != samples.size())
    throw Error("project_trace: points, weights and samples differ in length");
  auto out = SphericalTraceExpansion::zero(N);
  std::vector<CVec3> U, V;
  for (std::size_t q = 0; q < points.size(); ++q) {
    const Vec3 xh = points[q].normalized();
    const CVec3 &f = samples[q];
    if (std::abs(bdot(f, xh.cast<Complex>())) > 1e-8 * std::max(f.norm(), 1e-300))
      throw Error("project_trace: non-tangential sample at point " + std::to_string(q));
    vector_spherical_harmonics_all(N, xh, U, V);
    for (int k = 0; k < mode_count(N); ++k) {
      const auto kk = static_cast<std::size_t>(k);
      out.a(k) += weights[q] * f.dot(U[kk]) / R; // Eigen dot conjugates its first argument
      out.b(k) += weights[q] * f.dot(V[kk]) / R;
    }
  }
  // Eigen's dot gives conj(f).U; we need f.conj(U)
  out.a = out.a.conjugate();
  out.b = out.b.conjugate();
  return out;
}

DtNOperator::DtNOperator(Complex kappa, double R, int N, std::vector<Complex> rho)
    : kappa_(kappa), R_(R), N_(N), rho_(std::move(rho)) {}

Eigen::Matrix2cd DtNOperator::multiplier(int n) const {
  const Complex r = rho(n);
  Eigen::Matrix2cd M;
  M << 0.0, -kI / r, -kI * r, 0.0;
  return M;
}

DtNOperator build_calderon(Complex kappa, double R, int N) {
  if (N > kHankelMaxOrder)
    throw Error("DtN order " + std::to_string(N) + " exceeds the Hankel limit " +
                std::to_string(kHankelMaxOrder));
  if (N < 1)
    throw Error("DtN order must be >= 1");
  const bool aux = std::abs(kappa - kI) < 1e-14;
  if (!(kappa.real() > 0.0) && !aux)
    throw Error("Calderon map requires Re(kappa) > 0 or kappa = i");
  const Complex t = kappa * R;
  std::vector<Complex> h, dh;
  spherical_hankel_all(N, t, h, dh);
  std::vector<Complex> rho(static_cast<std::size_t>(N + 1), 0.0);
  for (int n = 1; n <= N; ++n) {
    const Complex xi = t * h[n];
    const Complex dxi = h[n] + t * dh[n];
    rho[n] = dxi / xi;
  }
  return DtNOperator(kappa, R, N, std::move(rho));
}

SphericalTraceExpansion apply_dtn(const DtNOperator &op, const SphericalTraceExpansion &lam) {
  if (lam.order > op.order())
    throw Error("apply_dtn: expansion order exceeds operator order");
  auto out = SphericalTraceExpansion::zero(lam.order);
  for (int n = 1; n <= lam.order; ++n) {
    const auto M = op.multiplier(n);
    for (int m = -n; m <= n; ++m) {
      const int k = mode_index(n, m);
      out.a(k) = M(0, 0) * lam.a(k) + M(0, 1) * lam.b(k);
      out.b(k) = M(1, 0) * lam.a(k) + M(1, 1) * lam.b(k);
    }
  }
  return out;
}

} // namespace emel
