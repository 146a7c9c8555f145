#include <gtest/gtest.h>

#include "emel/dtn.hpp"
#include "emel/kernels.hpp"
#include "emel/quadrature.hpp"
#include "test_support.hpp"

using namespace emel;

namespace {

struct SphereSamples {
  std::vector<Vec3> points, xhat;
  std::vector<double> weights;
};

SphereSamples samples(double R, int n) {
  const auto r = sphere_rule(n);
  SphereSamples s;
  for (std::size_t q = 0; q < r.xhat.size(); ++q) {
    s.xhat.push_back(r.xhat[q]);
    s.points.push_back(R * r.xhat[q]);
    s.weights.push_back(R * R * r.weights[q]);
  }
  return s;
}

// relative L2(S_R) residual of ik G_e(xhat x H) against xhat x curl H
double dipole_residual(const ElectricDipole &dip, double k, double R, int N) {
  const auto s = samples(R, 40);
  std::vector<CVec3> lam, target;
  for (std::size_t q = 0; q < s.points.size(); ++q) {
    const auto f = dipole_pair(s.points[q], dip, k);
    lam.push_back(cross(s.xhat[q], f.H));
    target.push_back(cross(s.xhat[q], CVec3(-kI * k * f.E)));
  }
  const auto G = apply_dtn(build_calderon(k, R, N), project_trace(s.points, s.weights, lam, R, N));
  double num = 0.0, den = 0.0;
  for (std::size_t q = 0; q < s.points.size(); ++q) {
    num += s.weights[q] * (target[q] - kI * k * G.evaluate(s.points[q], R)).squaredNorm();
    den += s.weights[q] * target[q].squaredNorm();
  }
  return std::sqrt(num / den);
}

} // namespace

TEST(DtN, InteriorDipoleOracle) {
  const ElectricDipole dip{Vec3(0.4, 0.1, -0.3), Vec3(0.2, -0.7, 0.5), 1.0};
  double prev = 1.0;
  for (int N = 2; N <= 15; ++N) {
    const double r = dipole_residual(dip, 2.0, 2.0, N);
    EXPECT_LT(r, prev) << N;
    prev = r;
  }
  EXPECT_LT(prev, 1e-6);
  // a centered dipole is a pure n = 1 field
  EXPECT_LT(dipole_residual({Vec3::Zero(), Vec3::UnitZ(), 1.0}, 1.3, 1.5, 1), 1e-10);
}

TEST(DtN, ProjectionRoundTrip) {
  const double R = 1.7;
  const int N = 6;
  std::mt19937_64 rng(9);
  auto lam = SphericalTraceExpansion::zero(N);
  for (int k = 0; k < mode_count(N); ++k) {
    const CVec3 c = test::random_cvec(rng);
    lam.a(k) = c(0);
    lam.b(k) = c(1);
  }
  const auto s = samples(R, 12);
  std::vector<CVec3> v;
  for (const auto &x : s.points)
    v.push_back(lam.evaluate(x, R));
  const auto back = project_trace(s.points, s.weights, v, R, N);
  EXPECT_LT((back.a - lam.a).norm(), 1e-12 * lam.a.norm());
  EXPECT_LT((back.b - lam.b).norm(), 1e-12 * lam.b.norm());
  v[3] += s.xhat[3].cast<Complex>();
  EXPECT_THROW(project_trace(s.points, s.weights, v, R, N), Error);
}

TEST(DtN, SignPropertyForImaginaryWaveNumber) {
  const double R = 2.0;
  const auto s = samples(R, 24);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> order(1, 15);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    const int N = order(rng);
    auto lam = SphericalTraceExpansion::zero(N);
    for (int k = 0; k < mode_count(N); ++k) {
      lam.a(k) = Complex(g(rng), g(rng));
      lam.b(k) = Complex(g(rng), g(rng));
    }
    const auto G = apply_dtn(build_calderon(kI, R, N), lam);
    Complex pairing = 0.0;
    for (std::size_t q = 0; q < s.points.size(); ++q) {
      const CVec3 l = lam.evaluate(s.points[q], R);
      pairing += s.weights[q] * bdot(G.evaluate(s.points[q], R), cross(CVec3(l.conjugate()), s.xhat[q]));
    }
    EXPECT_LT(pairing.real(), 0.0) << "trial " << t << " N " << N;
  }
}

TEST(DtN, MultiplierStructure) {
  const auto op = build_calderon(2.0, 2.0, 5);
  for (int n = 1; n <= 5; ++n) {
    const auto M = op.multiplier(n);
    EXPECT_EQ(M(0, 0), Complex(0.0));
    EXPECT_EQ(M(1, 1), Complex(0.0));
    // G_e^2 = -1 on each mode pair
    EXPECT_LT((M * M + Eigen::Matrix2cd::Identity()).norm(), 1e-12);
  }
  EXPECT_THROW(build_calderon(-1.0, 2.0, 5), Error);
  EXPECT_THROW(build_calderon(2.0, 2.0, 0), Error);
  EXPECT_THROW(build_calderon(2.0, 2.0, kHankelMaxOrder + 1), Error);
  EXPECT_THROW(apply_dtn(op, SphericalTraceExpansion::zero(6)), Error);
}
