#include <gtest/gtest.h>

#include <cmath>

#include "emel/kernels.hpp"
#include "emel/quadrature.hpp"

using namespace emel;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Integral of l1^a l2^b over the reference triangle of area 1/2.
double tri_moment(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }
double tet_moment(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

} // namespace

TEST(Quadrature, TriangleRulesExact) {
  for (int order = 1; order <= 4; ++order) {
    const auto &r = triangle_rule(order);
    for (int a = 0; a <= order; ++a)
      for (int b = 0; a + b <= order; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.weights.size(); ++q)
          s += r.weights[q] * std::pow(r.bary[q][0], a) * std::pow(r.bary[q][1], b);
        EXPECT_NEAR(0.5 * s, tri_moment(a, b), 1e-14) << order << " " << a << " " << b;
      }
  }
  EXPECT_THROW(triangle_rule(5), Error);
}

TEST(Quadrature, CollapsedRulesExact) {
  const auto tr = collapsed_triangle_rule(5); // degree 8
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b) {
      double s = 0.0;
      for (std::size_t q = 0; q < tr.weights.size(); ++q)
        s += tr.weights[q] * std::pow(tr.bary[q][0], a) * std::pow(tr.bary[q][1], b);
      EXPECT_NEAR(0.5 * s, tri_moment(a, b), 1e-14);
    }
  const auto tt = collapsed_tet_rule(4); // degree 5
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b)
      for (int c = 0; a + b + c <= 5; ++c) {
        double s = 0.0;
        for (std::size_t q = 0; q < tt.weights.size(); ++q)
          s += tt.weights[q] * std::pow(tt.bary[q][0], a) * std::pow(tt.bary[q][1], b) *
               std::pow(tt.bary[q][2], c);
        EXPECT_NEAR(s / 6.0, tet_moment(a, b, c), 1e-14);
      }
}

TEST(Quadrature, GaussLegendre) {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-14) << k;
  }
}

TEST(Quadrature, SphereRuleHarmonics) {
  const auto r = sphere_rule(8);
  double area = 0.0;
  for (double w : r.weights)
    area += w;
  EXPECT_NEAR(area, 4 * kPi, 1e-12);
  // orthonormality of Y_n^m up to degree 7 (products of degree <= 14 < 2n)
  for (int n = 0; n <= 7; ++n)
    for (int m = -n; m <= n; ++m)
      for (int n2 = 1; n2 <= 7; ++n2)
        for (int m2 = -n2; m2 <= n2; ++m2) {
          if (n == 0)
            continue;
          Complex s = 0.0;
          for (std::size_t q = 0; q < r.xhat.size(); ++q)
            s += r.weights[q] * vector_spherical_harmonic(n, m, r.xhat[q]).Y *
                 std::conj(vector_spherical_harmonic(n2, m2, r.xhat[q]).Y);
          EXPECT_NEAR(std::abs(s - (n == n2 && m == m2 ? 1.0 : 0.0)), 0.0, 1e-12);
        }
}
