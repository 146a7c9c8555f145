#pragma once

#include <variant>
#include <vector>

#include "emel/types.hpp"

namespace emel {

struct SurfaceQuadrature;

/// Phi(x, z) = exp(i k |x - z|) / (4 pi |x - z|) and its x-derivatives.
struct PhiDerivatives {
  Complex phi;
  CVec3 grad;
  CMat3 hess;
};

PhiDerivatives fundamental_solution(const Vec3 &x, const Vec3 &z, double kappa);

/// Hessian of Phi written entry by entry in the explicit form
///   4 pi d_lm Phi = d_l d_m e^{ikr} (-k^2/r^3 - 3ik/r^4 + 3/r^5) + delta_lm e^{ikr} (ik/r^2 - 1/r^3)
/// with d = x - z. Kept separate from fundamental_solution so the two can be
/// checked against each other.
CMat3 hessian_explicit(const Vec3 &x, const Vec3 &z, double kappa);

struct FieldPair {
  CVec3 E = CVec3::Zero();
  CVec3 H = CVec3::Zero();
};

struct PlaneWave {
  Vec3 d = Vec3::UnitZ();
  Vec3 p = Vec3::UnitX();
};

/// H = c curl(q Phi(., z)), E = -(1/ik) curl H. `c` is the normalization
/// 1 / ||curl(q Phi(., z))||_{L2(dD)}; `quad_order` and `quad_refine`
/// record the rule it was computed with.
struct ElectricDipole {
  Vec3 z = Vec3::Zero();
  Vec3 q = Vec3::UnitX();
  double c = 1.0;
  int quad_order = 0;
  int quad_refine = 0;
};

using IncidentField = std::variant<PlaneWave, ElectricDipole>;

FieldPair plane_wave(const Vec3 &x, const Vec3 &d, const Vec3 &p, double kappa);
FieldPair dipole_pair(const Vec3 &x, const ElectricDipole &dip, double kappa);
FieldPair incident_field(const Vec3 &x, const IncidentField &inc, double kappa);

/// Far-field amplitude of a dipole: H_inf = c (ik/4pi) (xhat x q) e^{-ik xhat.z},
/// E_inf = -xhat x H_inf.
FieldPair dipole_far_field(const Vec3 &xhat, const ElectricDipole &dip, double kappa);

/// c = 1 / ||curl(q Phi(., z))||_{L2} over the given surface rule.
double dipole_normalization(const Vec3 &z, const Vec3 &q, const SurfaceQuadrature &quad,
                            double kappa);

inline constexpr int kHankelMaxOrder = 25;

/// First-kind spherical Hankel function h_n(x) and its derivative, upward
/// recurrence from the closed forms of h_0 and h_1.
std::pair<Complex, Complex> spherical_hankel(int n, Complex x, int n_max = kHankelMaxOrder);

/// h_0..h_N and derivatives in one recurrence.
void spherical_hankel_all(int N, Complex x, std::vector<Complex> &h, std::vector<Complex> &dh);

/// Spherical Bessel functions of real argument: j_n via normalized downward
/// (Miller) recurrence, y_n via upward recurrence.
std::pair<double, double> spherical_bessel_j(int n, double x);
std::pair<double, double> spherical_bessel_y(int n, double x);

/// Index of mode (n, m), 1 <= n, |m| <= n, in a flat array: n^2 - 1 + (m + n).
inline int mode_index(int n, int m) { return n * n - 1 + (m + n); }
inline int mode_count(int N) { return N * (N + 2); }

struct VectorHarmonic {
  Complex Y;
  CVec3 U; // surface gradient of Y over sqrt(n(n+1))
  CVec3 V; // xhat x U
};

/// Orthonormal scalar harmonic Y_n^m (Condon-Shortley phase) and the
/// tangential pair (U_n^m, V_n^m) at the unit vector xhat.
VectorHarmonic vector_spherical_harmonic(int n, int m, const Vec3 &xhat);

/// U and V for every mode up to order N, indexed by mode_index.
void vector_spherical_harmonics_all(int N, const Vec3 &xhat, std::vector<CVec3> &U,
                                    std::vector<CVec3> &V);

} // namespace emel
