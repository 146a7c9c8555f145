#include <gtest/gtest.h>

#include "emel/geometry.hpp"
#include "test_support.hpp"

using namespace emel;

namespace {

const TetMesh &sphere_l1() {
  static const TetMesh mesh = load_mesh(test::mesh_path("sphere_R2_L1.msh"), 2.0);
  return mesh;
}

} // namespace

TEST(Geometry, VolumesAndAreas) {
  const auto &m = sphere_l1();
  double body = 0.0, shell = 0.0;
  for (std::size_t t = 0; t < m.tets().size(); ++t)
    (m.regions()[t] == Region::Body ? body : shell) += m.tet_volume(static_cast<int>(t));
  EXPECT_NEAR(body, 4.0 / 3.0 * kPi, 0.1 * 4.0 / 3.0 * kPi);
  EXPECT_NEAR(body + shell, 32.0 / 3.0 * kPi, 0.1 * 32.0 / 3.0 * kPi);
  double a_int = 0.0, a_sph = 0.0;
  for (const auto &f : m.facets()) {
    (f.tag == FacetTag::Interface ? a_int : a_sph) += f.area;
    const Vec3 c = (m.vertices()[f.v[0]] + m.vertices()[f.v[1]] + m.vertices()[f.v[2]]) / 3.0;
    EXPECT_GT(f.normal.dot(c), 0.0); // outward for both surfaces
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-12);
  }
  EXPECT_NEAR(a_int, 4 * kPi, 0.1 * 4 * kPi);
  EXPECT_NEAR(a_sph, 16 * kPi, 0.1 * 16 * kPi);
  EXPECT_DOUBLE_EQ(m.radius(), 2.0);
  EXPECT_GT(m.count(Region::Body), 0u);
  EXPECT_GT(m.count(FacetTag::Sphere), 0u);
}

TEST(Geometry, LocateAndDistance) {
  const auto &m = sphere_l1();
  EXPECT_EQ(m.region_of(Vec3::Zero()), Region::Body);
  EXPECT_EQ(m.region_of(Vec3(0.0, 0.0, 1.5)), Region::Shell);
  EXPECT_FALSE(m.region_of(Vec3(0.0, 0.0, 2.5)).has_value());
  const auto loc = m.locate(Vec3(0.3, -0.2, 0.1));
  ASSERT_TRUE(loc.has_value());
  const auto &t = m.tets()[static_cast<std::size_t>(loc->tet)];
  Vec3 x = Vec3::Zero();
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    x += loc->bary[static_cast<std::size_t>(k)] * m.vertices()[static_cast<std::size_t>(t[k])];
    s += loc->bary[static_cast<std::size_t>(k)];
  }
  EXPECT_NEAR((x - Vec3(0.3, -0.2, 0.1)).norm(), 0.0, 1e-12);
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(m.distance_to(FacetTag::Interface, Vec3(0.0, 0.0, 1.5)), 0.5, 0.05);
  EXPECT_NEAR(m.distance_to(FacetTag::Sphere, Vec3(0.0, 0.0, 1.5)), 0.5, 0.05);
  EXPECT_GT(m.local_h(FacetTag::Interface, Vec3(0.0, 0.0, 1.2)), 0.0);
  EXPECT_LE(m.local_h(FacetTag::Interface, Vec3(0.0, 0.0, 1.2)), m.h_max());
}

TEST(Geometry, EdgesAreConsistent) {
  const auto &m = sphere_l1();
  for (std::size_t t = 0; t < m.tets().size(); t += 97)
    for (int e = 0; e < 6; ++e) {
      const auto &tv = m.tets()[t];
      const int a = tv[kTetEdges[e][0]], b = tv[kTetEdges[e][1]];
      const int id = m.tet_edges()[t][static_cast<std::size_t>(e)];
      EXPECT_EQ(m.edge_index(a, b), id);
      EXPECT_EQ(m.edges()[static_cast<std::size_t>(id)][0], std::min(a, b));
    }
}

TEST(Geometry, SurfaceRulesAgreeOnArea) {
  const auto &m = sphere_l1();
  const double a = surface_quadrature(m, FacetTag::Interface, 2).total_weight();
  EXPECT_NEAR(refined_surface_quadrature(m, FacetTag::Interface, 2, 2).total_weight(), a, 1e-12);
  const auto f = focused_surface_quadrature(m, FacetTag::Interface, 2, Vec3(0.0, 0.0, 1.05));
  EXPECT_NEAR(f.total_weight(), a, 1e-12);
  EXPECT_GT(f.size(), surface_quadrature(m, FacetTag::Interface, 2).size());
  // linear integrand: first moment of a closed surface times normal vanishes
  Vec3 flux = Vec3::Zero();
  for (std::size_t q = 0; q < f.size(); ++q)
    flux += f.weights[q] * f.normals[q];
  EXPECT_NEAR(flux.norm(), 0.0, 1e-12);
}

TEST(Geometry, SingleTetMeshes) {
  // body tet inside a shell made of one inverted tet must fail validation
  std::vector<Vec3> v = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  EXPECT_THROW(TetMesh::from_data(v, {{0, 2, 1, 3}}, {Region::Body}, {}, 2.0), MeshError);
  EXPECT_THROW(TetMesh::from_data(v, {{0, 1, 2, 3}}, {Region::Body}, {}, 2.0), MeshError);
  EXPECT_THROW(TetMesh::from_data(v, {{0, 1, 2, 7}}, {Region::Body}, {}, 2.0), MeshError);
  EXPECT_THROW(TetMesh::from_data(v, {{0, 1, 2, 3}}, {Region::Body}, {}, -1.0), MeshError);
}

TEST(Geometry, MeshFileErrors) {
  EXPECT_THROW(load_mesh("/nonexistent/file.msh", 2.0), MeshError);
  EXPECT_THROW(load_mesh(test::mesh_path("sphere_R2_L1.msh"), 20.0), MeshError); // off |x| = R by more than 10 h^2
}

TEST(Geometry, ProbePoints) {
  const auto &m = sphere_l1();
  const Vec3 nu = Vec3::UnitZ();
  const auto anchor = Vec3(0.0, 0.0, 1.0);
  const double dist = m.distance_to(FacetTag::Interface, anchor);
  const Vec3 a = anchor - dist * nu; // on the faceted surface
  const auto p = probe_points(a, nu, 0.2, 4, m);
  ASSERT_EQ(p.exterior.size(), 4u);
  for (int j = 1; j <= 4; ++j) {
    const auto &z = p.exterior[static_cast<std::size_t>(j - 1)];
    const auto &y = p.interior[static_cast<std::size_t>(j - 1)];
    EXPECT_NEAR((z - a).norm(), 0.2 / j, 1e-12);
    EXPECT_NEAR((y - a).norm(), 0.2 / j, 1e-12);
    EXPECT_EQ(m.region_of(z), Region::Shell);
    EXPECT_EQ(m.region_of(y), Region::Body);
  }
  EXPECT_THROW(probe_points(a, nu, 1.5, 2, m), Error);
  EXPECT_THROW(probe_points(a, nu, 0.2, 0, m), Error);
  EXPECT_THROW(probe_points(a + 0.9 * nu, nu, 0.2, 2, m), Error);
}
