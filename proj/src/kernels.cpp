#include "emel/kernels.hpp"

#include <cmath>
#include <iostream>

#include "emel/geometry.hpp"

namespace emel {

PhiDerivatives fundamental_solution(const Vec3 &x, const Vec3 &z, double kappa) {
  const Vec3 d = x - z;
  const double r = d.norm();
  if (r < 1e-12)
    throw NearSingularityError("fundamental solution evaluated at its source (|x - z| < 1e-12)");
  const Vec3 rh = d / r;
  const Complex ik = kI * kappa;
  PhiDerivatives out;
  out.phi = std::exp(ik * r) / (4.0 * kPi * r);
  // radial derivatives of f(r) = e^{ikr}/(4 pi r)
  const Complex a = ik - 1.0 / r;
  const Complex f1 = out.phi * a;
  const Complex f2 = out.phi * (a * a + 1.0 / (r * r));
  out.grad = f1 * rh.cast<Complex>();
  const Mat3 P = rh * rh.transpose();
  out.hess = f2 * P.cast<Complex>() + (f1 / r) * (Mat3::Identity() - P).cast<Complex>();
  return out;
}

CMat3 hessian_explicit(const Vec3 &x, const Vec3 &z, double kappa) {
  const Vec3 d = x - z;
  const double r = d.norm();
  if (r < 1e-12)
    throw NearSingularityError("Hessian of the fundamental solution evaluated at its source");
  const Complex e = std::exp(kI * kappa * r);
  const Complex ik = kI * kappa;
  const double r2 = r * r, r3 = r2 * r, r4 = r3 * r, r5 = r4 * r;
  CMat3 h;
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m) {
      Complex v = d(l) * d(m) * e * (-kappa * kappa / r3 - 3.0 * ik / r4 + 3.0 / r5);
      if (l == m)
        v += ik * e / r2 - e / r3;
      h(l, m) = v / (4.0 * kPi);
    }
  return h;
}

FieldPair plane_wave(const Vec3 &x, const Vec3 &d, const Vec3 &p, double kappa) {
  if (std::abs(d.norm() - 1.0) > 1e-10)
    throw Error("plane wave direction must be a unit vector");
  const Complex ik = kI * kappa;
  const Complex e = std::exp(ik * x.dot(d));
  const Vec3 dxp = d.cross(p);
  FieldPair f;
  f.H = ik * e * dxp.cast<Complex>();
  f.E = -ik * e * d.cross(dxp).cast<Complex>();
  return f;
}

FieldPair dipole_pair(const Vec3 &x, const ElectricDipole &dip, double kappa) {
  const auto k = fundamental_solution(x, dip.z, kappa);
  const CVec3 q = dip.q.cast<Complex>();
  FieldPair f;
  f.H = dip.c * cross(k.grad, q);
  // curl curl(q Phi) = grad div(q Phi) - Lap(q Phi) = hess q + k^2 Phi q
  f.E = -(dip.c / (kI * kappa)) * (k.hess * q + kappa * kappa * k.phi * q);
  return f;
}

FieldPair incident_field(const Vec3 &x, const IncidentField &inc, double kappa) {
  if (const auto *pw = std::get_if<PlaneWave>(&inc))
    return plane_wave(x, pw->d, pw->p, kappa);
  return dipole_pair(x, std::get<ElectricDipole>(inc), kappa);
}

FieldPair dipole_far_field(const Vec3 &xhat, const ElectricDipole &dip, double kappa) {
  FieldPair f;
  const Complex phase = std::exp(-kI * kappa * xhat.dot(dip.z));
  f.H = (dip.c * kI * kappa / (4.0 * kPi) * phase) * CVec3(xhat.cross(dip.q).cast<Complex>());
  f.E = -cross(xhat, f.H);
  return f;
}

double dipole_normalization(const Vec3 &z, const Vec3 &q, const SurfaceQuadrature &quad,
                            double kappa) {
  double s = 0.0, closest = INFINITY, spacing = 0.0;
  const CVec3 qc = q.cast<Complex>();
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto k = fundamental_solution(quad.points[i], z, kappa);
    s += quad.weights[i] * cross(k.grad, qc).squaredNorm();
    const double r = (quad.points[i] - z).norm();
    if (r < closest) {
      closest = r;
      spacing = std::sqrt(quad.weights[i]);
    }
  }
  if (!(s > 0.0))
    throw Error("dipole normalization undefined: ||curl(q Phi)|| = 0");
  if (closest < spacing)
    std::clog << "warning: dipole source at distance " << closest
              << " is within the quadrature spacing " << spacing
              << "; raise the surface quadrature order\n";
  return 1.0 / std::sqrt(s);
}

void spherical_hankel_all(int N, Complex x, std::vector<Complex> &h, std::vector<Complex> &dh) {
  if (x == Complex(0.0))
    throw Error("spherical Hankel function evaluated at 0");
  h.assign(static_cast<std::size_t>(N + 2), 0.0);
  dh.assign(static_cast<std::size_t>(N + 1), 0.0);
  const Complex e = std::exp(kI * x);
  h[0] = -kI * e / x;
  h[1] = -(x + kI) * e / (x * x);
  for (int n = 1; n <= N; ++n)
    h[n + 1] = (2.0 * n + 1.0) / x * h[n] - h[n - 1];
  dh[0] = -h[1];
  for (int n = 1; n <= N; ++n)
    dh[n] = h[n - 1] - (n + 1.0) / x * h[n];
  h.resize(static_cast<std::size_t>(N + 1));
}

std::pair<Complex, Complex> spherical_hankel(int n, Complex x, int n_max) {
  if (n < 0 || n > n_max)
    throw Error("spherical Hankel order " + std::to_string(n) + " outside 0.." +
                std::to_string(n_max));
  std::vector<Complex> h, dh;
  spherical_hankel_all(n, x, h, dh);
  return {h[n], dh[n]};
}

std::pair<double, double> spherical_bessel_j(int n, double x) {
  if (x == 0.0)
    return {n == 0 ? 1.0 : 0.0, n == 1 ? 1.0 / 3.0 : 0.0};
  const int start = std::max(n, static_cast<int>(std::abs(x))) + 40;
  std::vector<double> j(static_cast<std::size_t>(start + 2), 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-30;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k + 1.0) / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250)
      for (int i = k - 1; i <= start; ++i)
        j[i] *= 1e-250;
  }
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / j[0] : j1 / j[1];
  const double jn = j[n] * scale;
  const double jd = n == 0 ? -j[1] * scale : (j[n - 1] - (n + 1.0) / x * j[n]) * scale;
  return {jn, jd};
}

std::pair<double, double> spherical_bessel_y(int n, double x) {
  std::vector<double> y(static_cast<std::size_t>(n + 2));
  y[0] = -std::cos(x) / x;
  y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int k = 1; k <= n; ++k)
    y[k + 1] = (2.0 * k + 1.0) / x * y[k] - y[k - 1];
  const double yd = n == 0 ? -y[1] : y[n - 1] - (n + 1.0) / x * y[n];
  return {y[n], yd};
}

namespace {

// P_n^m(cos t), Q_n^m = P_n^m / sin t (m >= 1) and dP_n^m/dt for 0 <= m <= n <= N,
// stored at [n][m].
struct LegendreTable {
  std::vector<std::vector<double>> P, Q, dP;
};

LegendreTable legendre_table(int N, double x, double s) {
  LegendreTable t;
  const auto sz = static_cast<std::size_t>(N + 1);
  t.P.assign(sz, std::vector<double>(sz, 0.0));
  t.Q.assign(sz, std::vector<double>(sz, 0.0));
  t.dP.assign(sz, std::vector<double>(sz, 0.0));
  double pmm = 1.0; // (-1)^m (2m-1)!! s^m
  double qmm = 1.0; // (-1)^m (2m-1)!! s^{m-1}
  for (int m = 0; m <= N; ++m) {
    if (m > 0) {
      qmm = -(2.0 * m - 1.0) * (m == 1 ? 1.0 : qmm * s);
      pmm = -(2.0 * m - 1.0) * s * pmm;
    }
    t.P[m][m] = pmm;
    if (m > 0)
      t.Q[m][m] = qmm;
    if (m + 1 <= N) {
      t.P[m + 1][m] = x * (2.0 * m + 1.0) * pmm;
      if (m > 0)
        t.Q[m + 1][m] = x * (2.0 * m + 1.0) * qmm;
    }
    for (int n = m + 2; n <= N; ++n) {
      t.P[n][m] = ((2.0 * n - 1.0) * x * t.P[n - 1][m] - (n + m - 1.0) * t.P[n - 2][m]) / (n - m);
      if (m > 0)
        t.Q[n][m] =
            ((2.0 * n - 1.0) * x * t.Q[n - 1][m] - (n + m - 1.0) * t.Q[n - 2][m]) / (n - m);
    }
  }
  for (int n = 1; n <= N; ++n) {
    t.dP[n][0] = n >= 1 ? t.P[n][1] : 0.0;
    for (int m = 1; m <= n; ++m)
      t.dP[n][m] = n * x * t.Q[n][m] - (n + m) * (n - 1 >= m ? t.Q[n - 1][m] : 0.0);
  }
  return t;
}

double ynm_norm(int n, int m) {
  return std::sqrt((2.0 * n + 1.0) / (4.0 * kPi) *
                   std::exp(std::lgamma(n - m + 1.0) - std::lgamma(n + m + 1.0)));
}

struct Frame {
  double ct, st, phi;
  Vec3 th, ph;
};

Frame frame(const Vec3 &xhat) {
  Frame f;
  const Vec3 u = xhat.normalized();
  f.ct = std::clamp(u(2), -1.0, 1.0);
  f.st = std::sqrt(std::max(0.0, 1.0 - f.ct * f.ct));
  f.phi = std::atan2(u(1), u(0));
  const double cp = std::cos(f.phi), sp = std::sin(f.phi);
  f.th = Vec3(f.ct * cp, f.ct * sp, -f.st);
  f.ph = Vec3(-sp, cp, 0.0);
  return f;
}

} // namespace

VectorHarmonic vector_spherical_harmonic(int n, int m, const Vec3 &xhat) {
  if (n < 0 || std::abs(m) > n)
    throw Error("invalid harmonic index (n, m)");
  const Frame f = frame(xhat);
  const int am = std::abs(m);
  const auto t = legendre_table(std::max(n, 1), f.ct, f.st);
  const double c = ynm_norm(n, am);
  const Complex e = std::exp(kI * static_cast<double>(am) * f.phi);
  VectorHarmonic out;
  out.Y = c * t.P[n][am] * e;
  if (n >= 1) {
    const double s = 1.0 / std::sqrt(n * (n + 1.0));
    const Complex dth = c * t.dP[n][am] * e * s;
    const Complex dph = c * kI * static_cast<double>(am) * t.Q[n][am] * e * s;
    out.U = dth * f.th.cast<Complex>() + dph * f.ph.cast<Complex>();
    out.V = dth * f.ph.cast<Complex>() - dph * f.th.cast<Complex>();
  } else {
    out.U.setZero();
    out.V.setZero();
  }
  if (m < 0) {
    const double sg = (am % 2 == 0) ? 1.0 : -1.0;
    out.Y = sg * std::conj(out.Y);
    out.U = sg * out.U.conjugate();
    out.V = sg * out.V.conjugate();
  }
  return out;
}

void vector_spherical_harmonics_all(int N, const Vec3 &xhat, std::vector<CVec3> &U,
                                    std::vector<CVec3> &V) {
  const Frame f = frame(xhat);
  const auto t = legendre_table(N, f.ct, f.st);
  U.resize(static_cast<std::size_t>(mode_count(N)));
  V.resize(U.size());
  const CVec3 th = f.th.cast<Complex>(), ph = f.ph.cast<Complex>();
  for (int m = 0; m <= N; ++m) {
    const Complex e = std::exp(kI * static_cast<double>(m) * f.phi);
    const double sg = (m % 2 == 0) ? 1.0 : -1.0;
    for (int n = std::max(m, 1); n <= N; ++n) {
      const double c = ynm_norm(n, m) / std::sqrt(n * (n + 1.0));
      const Complex dth = c * t.dP[n][m] * e;
      const Complex dph = c * kI * static_cast<double>(m) * t.Q[n][m] * e;
      const CVec3 u = dth * th + dph * ph;
      const CVec3 v = dth * ph - dph * th;
      U[mode_index(n, m)] = u;
      V[mode_index(n, m)] = v;
      if (m > 0) {
        U[mode_index(n, -m)] = sg * u.conjugate();
        V[mode_index(n, -m)] = sg * v.conjugate();
      }
    }
  }
}

} // namespace emel
