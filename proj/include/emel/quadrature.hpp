#pragma once

#include <array>
#include <vector>

#include "emel/types.hpp"

namespace emel {

/// Rule on a triangle in barycentric form. Weights sum to one, so a facet
/// integral is area * sum w_q f(x_q).
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
  int degree = 0;
};

/// Rule on a tetrahedron in barycentric form, weights summing to one.
struct TetRule {
  std::vector<std::array<double, 4>> bary;
  std::vector<double> weights;
};

/// Symmetric rules exact for polynomials of degree `order`, order in 1..4.
const TriangleRule &triangle_rule(int order);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w);

/// Collapsed (Duffy) product rule on the triangle with n points per direction;
/// exact up to degree 2n - 2. Used for reference integrals and adaptive
/// refinement of near-singular integrands.
TriangleRule collapsed_triangle_rule(int n);

/// Collapsed product rule on the tetrahedron, exact up to degree 2n - 3.
TetRule collapsed_tet_rule(int n);

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) with n nodes
/// and 2n equispaced azimuths; integrates spherical harmonics of degree
/// <= 2n - 1 exactly.
struct SphereRule {
  std::vector<Vec3> xhat;
  std::vector<double> theta, phi;
  std::vector<double> weights;
};
SphereRule sphere_rule(int n);

} // namespace emel
