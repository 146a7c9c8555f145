#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "emel/postprocess.hpp"
#include "test_support.hpp"

using namespace emel;

namespace {

const TetMesh &sphere_l1() {
  static const TetMesh mesh = load_mesh(test::mesh_path("sphere_R2_L1.msh"), 2.0);
  return mesh;
}

std::array<double, 4> random_bary(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> b{};
  double s = 0.0;
  for (auto &v : b)
    s += (v = u(rng));
  for (auto &v : b)
    v /= s;
  return b;
}

// Edge degrees of freedom of a field: line integral from the lower to the
// higher global vertex, by Simpson's rule (exact for quadratic integrands).
template <class F>
Eigen::Matrix<double, 6, 1> edge_dofs(const TetGeometry &g, const std::array<int, 4> &tv, F f) {
  Eigen::Matrix<double, 6, 1> c;
  for (int e = 0; e < 6; ++e) {
    int i = kTetEdges[e][0], j = kTetEdges[e][1];
    if (tv[i] > tv[j])
      std::swap(i, j);
    const Vec3 a = g.x[static_cast<std::size_t>(i)], b = g.x[static_cast<std::size_t>(j)];
    const Vec3 t = b - a;
    c(e) = (f(a).dot(t) + 4.0 * f(0.5 * (a + b)).dot(t) + f(b).dot(t)) / 6.0;
  }
  return c;
}

} // namespace

TEST(Fem, NedelecReproducesLowestOrderFields) {
  const auto &m = sphere_l1();
  std::mt19937_64 rng(8);
  const Vec3 a(0.3, -1.2, 0.7), b(-0.4, 0.5, 0.9);
  const auto field = [&](const Vec3 &x) { return Vec3(a + b.cross(x)); };
  for (int t = 0; t < static_cast<int>(m.tets().size()); t += 53) {
    const auto g = tet_geometry(m, t);
    const auto &tv = m.tets()[static_cast<std::size_t>(t)];
    const auto c = edge_dofs(g, tv, field);
    const auto bary = random_bary(rng);
    const auto phi = nedelec_values(g, tv, bary);
    const auto curls = nedelec_curls(g, tv);
    Vec3 v = Vec3::Zero(), cv = Vec3::Zero(), x = Vec3::Zero();
    for (int e = 0; e < 6; ++e) {
      v += c(e) * phi[static_cast<std::size_t>(e)];
      cv += c(e) * curls[static_cast<std::size_t>(e)];
    }
    for (int k = 0; k < 4; ++k)
      x += bary[static_cast<std::size_t>(k)] * g.x[static_cast<std::size_t>(k)];
    EXPECT_LT((v - field(x)).norm(), 1e-11);
    EXPECT_LT((cv - 2.0 * b).norm(), 1e-11);
  }
}

TEST(Fem, ElementKernels) {
  const auto &m = sphere_l1();
  const auto C = StiffnessTensor::isotropic(2.0, 1.0);
  const Vec3 w(0.2, -0.5, 1.1), s(1.0, 2.0, -0.3);
  for (int t = 0; t < static_cast<int>(m.tets().size()); t += 71) {
    const auto g = tet_geometry(m, t);
    const auto &tv = m.tets()[static_cast<std::size_t>(t)];
    // rigid motions have zero strain energy
    Eigen::Matrix<double, 12, 1> u;
    for (int k = 0; k < 4; ++k)
      u.segment<3>(3 * k) = s + w.cross(g.x[static_cast<std::size_t>(k)]);
    const auto K = elastic_stiffness_matrix(g, C);
    EXPECT_LT((K * u).norm(), 1e-12 * K.norm());
    EXPECT_LT((K - K.transpose()).norm(), 1e-14 * K.norm());
    // gradients of P1 functions are curl-free
    const Vec3 p(0.7, -0.2, 0.4);
    Eigen::Matrix<double, 6, 1> grad;
    for (int e = 0; e < 6; ++e) {
      int i = kTetEdges[e][0], j = kTetEdges[e][1];
      if (tv[i] > tv[j])
        std::swap(i, j);
      grad(e) = p.dot(g.x[static_cast<std::size_t>(j)] - g.x[static_cast<std::size_t>(i)]);
    }
    const auto S = edge_curlcurl_matrix(g, tv);
    EXPECT_LT((S * grad).norm(), 1e-12 * S.norm());
    const auto M = edge_mass_matrix(g, tv);
    using Sym6 = Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>>;
    EXPECT_GT(Sym6(M).eigenvalues().minCoeff(), 0.0);
    // mass matrix against the interpolant of a constant field gives its L2 norm
    const auto c = edge_dofs(g, tv, [&](const Vec3 &) { return p; });
    EXPECT_NEAR(c.dot(M * c), p.squaredNorm() * g.volume, 1e-12);
    EXPECT_NEAR(p1_mass_matrix(g).sum(), g.volume, 1e-14);
  }
}

TEST(Fem, AssemblyIsThreadIndependent) {
  const auto &m = sphere_l1();
  const auto C = StiffnessTensor::isotropic(2.0, 1.0);
  const auto rho = MassDensityField::uniform(m.count(Region::Body), 1.0);
  const BackgroundMedium med(1.0, 1.0, 2.0);
  const auto dtn = build_calderon(2.0, 2.0, 6);
  AssemblyOptions one, four;
  four.threads = 4;
  const auto a = assemble_coupled(m, C, rho, med, {1.0, kI}, dtn, one);
  const auto b = assemble_coupled(m, C, rho, med, {1.0, kI}, dtn, four);
  ASSERT_EQ(a.A.nonZeros(), b.A.nonZeros());
  for (Eigen::Index k = 0; k < a.A.nonZeros(); ++k) {
    ASSERT_EQ(a.A.valuePtr()[k], b.A.valuePtr()[k]);
    ASSERT_EQ(a.A.innerIndexPtr()[k], b.A.innerIndexPtr()[k]);
  }
  EXPECT_EQ(a.dtn.L, b.dtn.L);
  EXPECT_EQ(a.dtn.P, b.dtn.P);
}

TEST(Fem, ApplyMatchesSparsePlusLowRank) {
  const auto &m = sphere_l1();
  const auto sys = assemble_coupled(m, StiffnessTensor::isotropic(2.0, 1.0),
                                    MassDensityField::uniform(m.count(Region::Body), 1.0),
                                    BackgroundMedium(1.0, 1.0, 2.0), {1.0, kI},
                                    build_calderon(2.0, 2.0, 6));
  ASSERT_FALSE(sys.dtn.empty());
  std::mt19937_64 rng(1);
  CVector x(sys.layout.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x(i) = test::random_cvec(rng)(0);
  CVector want = sys.A * x;
  CVector xs(static_cast<Eigen::Index>(sys.dtn.dofs.size()));
  for (std::size_t i = 0; i < sys.dtn.dofs.size(); ++i)
    xs(static_cast<Eigen::Index>(i)) = x(sys.dtn.dofs[i]);
  const CVector ys = sys.dtn.L * (sys.dtn.W * (sys.dtn.P * xs));
  for (std::size_t i = 0; i < sys.dtn.dofs.size(); ++i)
    want(sys.dtn.dofs[i]) += ys(static_cast<Eigen::Index>(i));
  EXPECT_LT((sys.apply(x) - want).norm(), 1e-13 * want.norm());
  EXPECT_EQ(sys.layout.n_u, sys.u_space.ndofs());
  EXPECT_EQ(sys.layout.n_H, sys.h_space.ndofs());
}

TEST(Fem, AssemblyRejectsBadInput) {
  const auto &m = sphere_l1();
  const auto C = StiffnessTensor::isotropic(2.0, 1.0);
  const auto rho = MassDensityField::uniform(m.count(Region::Body), 1.0);
  const BackgroundMedium med(1.0, 1.0, 2.0);
  EXPECT_THROW(assemble_coupled(m, C, rho, med, {1.0, 1.0}, build_calderon(2.0, 2.0, 4)),
               MaterialError);
  EXPECT_THROW(assemble_coupled(m, C, MassDensityField::uniform(3, 1.0), med, {1.0, kI},
                                build_calderon(2.0, 2.0, 4)),
               MaterialError);
  EXPECT_THROW(assemble_coupled(m, C, rho, med, {1.0, kI}, build_calderon(3.0, 2.0, 4)), Error);
  AssemblyOptions contrast;
  contrast.check_admissibility = false;
  EXPECT_NO_THROW(
      assemble_coupled(m, C, rho, med, {1.0, 1.0}, build_calderon(2.0, 2.0, 4), contrast));
}

TEST(Fem, AuxiliaryProblemConverges) {
  // u = (x^2, y^2, z^2), H = (y^2, z^2, x^2) in the unit ball
  const double lambda = 2.0, mu = 1.0, k = 2.0;
  const CouplingConstants bc{1.0, kI};
  const auto C = StiffnessTensor::isotropic(lambda, mu);
  ExactFields ex;
  ex.u = [](const Vec3 &x) { return CVec3(Vec3(x(0) * x(0), x(1) * x(1), x(2) * x(2)).cast<Complex>()); };
  ex.grad_u = [](const Vec3 &x) { return CMat3(Vec3(2 * x(0), 2 * x(1), 2 * x(2)).cast<Complex>().asDiagonal()); };
  ex.H = [](const Vec3 &x) { return CVec3(Vec3(x(1) * x(1), x(2) * x(2), x(0) * x(0)).cast<Complex>()); };
  ex.curl_H = [](const Vec3 &x) { return CVec3(Vec3(-2 * x(2), -2 * x(0), -2 * x(1)).cast<Complex>()); };
  const auto xi1 = [&](const Vec3 &x) { return CVec3(ex.H(x) - 2.0 * CVec3::Ones()); };
  const auto xi2 = [&](const Vec3 &x) {
    return CVec3((2.0 * mu + 2.0 * (lambda + mu)) * CVec3::Ones() - ex.u(x));
  };
  const auto h1 = [&](const Vec3 &x, const Vec3 &nu) {
    return CVec3(traction(C, ex.grad_u(x), nu) - bc.b1 * cross(nu, ex.H(x)));
  };
  const auto h2 = [&](const Vec3 &x, const Vec3 &nu) {
    return CVec3(cross(nu, ex.curl_H(x)) + kI * k / bc.b2 * cross(nu, ex.u(x)));
  };
  std::vector<double> err;
  for (const char *name : {"sphere_R2_L1.msh", "sphere_R2_L2.msh"}) {
    const auto m = load_mesh(test::mesh_path(name), 2.0);
    const auto sys = assemble_auxiliary(m, C, bc, k, xi1, xi2, h1, h2);
    const auto sol = solve(sys);
    EXPECT_LT(sol.residual, 1e-10);
    const auto e = solution_errors(m, sys, sol.x, ex);
    err.push_back(e.total());
  }
  EXPECT_LT(err[1], 0.85 * err[0]);
  EXPECT_THROW(assemble_auxiliary(sphere_l1(), C, {1.0, -kI}, k, xi1, xi2, h1, h2), MaterialError);
}
