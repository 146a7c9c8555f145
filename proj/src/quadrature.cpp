#include "emel/quadrature.hpp"

#include <cmath>

namespace emel {
namespace {

TriangleRule make_rule(int degree) {
  TriangleRule r;
  r.degree = degree;
  auto add = [&r](double a, double b, double w) {
    r.bary.push_back({1.0 - a - b, a, b});
    r.weights.push_back(w);
  };
  auto add3 = [&](double a, double b, double w) {
    // all three cyclic placements of (1-a-b, a, b) are symmetric images
    const double c = 1.0 - a - b;
    add(a, b, w);
    add(b, c, w);
    add(c, a, w);
  };
  switch (degree) {
  case 1:
    add(1.0 / 3.0, 1.0 / 3.0, 1.0);
    break;
  case 2:
    add(1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0);
    add(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
    add(1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0);
    break;
  case 3: {
    // Strang-Fix six-point rule
    const double a = 0.659027622374092, b = 0.231933368553031;
    add3(a, b, 1.0 / 6.0);
    add3(b, a, 1.0 / 6.0);
    break;
  }
  case 4: {
    // Dunavant six-point rule
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    add3(a1, a1, w1);
    add3(a2, a2, w2);
    break;
  }
  default:
    throw Error("triangle quadrature order must be in 1..4");
  }
  return r;
}

} // namespace

const TriangleRule &triangle_rule(int order) {
  static const std::array<TriangleRule, 4> rules = {make_rule(1), make_rule(2), make_rule(3),
                                                    make_rule(4)};
  if (order < 1 || order > 4)
    throw Error("triangle quadrature order must be in 1..4");
  return rules[static_cast<std::size_t>(order - 1)];
}

void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
        break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = -z;
    x[hi] = z;
    w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

TriangleRule collapsed_triangle_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  TriangleRule r;
  r.degree = 2 * n - 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = 0.5 * (x[i] + 1.0), t = 0.5 * (x[j] + 1.0);
      const double a = s, b = (1.0 - s) * t;
      // reference area 1/2 -> weights normalized to sum 1
      r.bary.push_back({1.0 - a - b, a, b});
      r.weights.push_back(0.25 * w[i] * w[j] * (1.0 - s) * 2.0);
    }
  return r;
}

TetRule collapsed_tet_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  TetRule r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double s = 0.5 * (x[i] + 1.0), t = 0.5 * (x[j] + 1.0), u = 0.5 * (x[k] + 1.0);
        const double a = s, b = (1.0 - s) * t, c = (1.0 - s) * (1.0 - t) * u;
        const double jac = (1.0 - s) * (1.0 - s) * (1.0 - t);
        r.bary.push_back({1.0 - a - b - c, a, b, c});
        // reference volume 1/6
        r.weights.push_back(0.125 * w[i] * w[j] * w[k] * jac * 6.0);
      }
  return r;
}

SphereRule sphere_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  SphereRule r;
  const int nphi = 2 * n;
  for (int i = 0; i < n; ++i) {
    const double ct = x[i], st = std::sqrt(1.0 - ct * ct);
    const double th = std::acos(ct);
    for (int k = 0; k < nphi; ++k) {
      const double ph = 2.0 * kPi * k / nphi;
      r.xhat.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
      r.theta.push_back(th);
      r.phi.push_back(ph);
      r.weights.push_back(w[i] * 2.0 * kPi / nphi);
    }
  }
  return r;
}

} // namespace emel
