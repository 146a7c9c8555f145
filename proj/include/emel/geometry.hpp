#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "emel/quadrature.hpp"
#include "emel/types.hpp"

namespace emel {

enum class Region : int { Body = 1, Shell = 2 };
enum class FacetTag : int { Interface = 11, Sphere = 12 };

struct Facet {
  std::array<int, 3> v{};
  FacetTag tag = FacetTag::Interface;
  int body_tet = -1;  // -1 on SPHERE facets
  int shell_tet = -1; // the adjacent SHELL tet
  Vec3 normal;        // out of D on INTERFACE, out of B_R on SPHERE
  double area = 0.0;
};

struct PointLocation {
  int tet = -1;
  std::array<double, 4> bary{};
};

/// Tetrahedral mesh of B_R split into the body D and the shell B_R \ D.
/// Construction validates every structural invariant; the object is
/// immutable afterwards.
class TetMesh {
public:
  static TetMesh from_data(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                           std::vector<Region> regions,
                           std::vector<std::pair<std::array<int, 3>, FacetTag>> facets, double R);

  const std::vector<Vec3> &vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>> &tets() const { return tets_; }
  const std::vector<Region> &regions() const { return regions_; }
  const std::vector<Facet> &facets() const { return facets_; }

  /// Global edges as (low, high) vertex pairs; tet_edges()[t][e] indexes them
  /// using the local edge ordering of kTetEdges.
  const std::vector<std::array<int, 2>> &edges() const { return edges_; }
  const std::vector<std::array<int, 6>> &tet_edges() const { return tet_edges_; }
  int edge_index(int a, int b) const;

  double radius() const { return R_; }
  double h_max() const { return h_max_; }
  double tet_volume(int t) const;
  double tet_diameter(int t) const;
  std::size_t count(Region r) const;
  std::size_t count(FacetTag tag) const;

  std::optional<PointLocation> locate(const Vec3 &x) const;
  std::optional<Region> region_of(const Vec3 &x) const;

  /// Shortest distance from x to the surface made of facets with the tag.
  double distance_to(FacetTag tag, const Vec3 &x, int *facet = nullptr) const;

  /// Longest edge among the facets touching the closest point on the tagged
  /// surface; used as local mesh size.
  double local_h(FacetTag tag, const Vec3 &x) const;

  std::string report() const;

private:
  void build_edges();
  void build_locator();

  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<Region> regions_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 6>> tet_edges_;
  std::unordered_map<long long, int> edge_lookup_;
  double R_ = 0.0;
  double h_max_ = 0.0;

  // uniform bucket grid over the bounding box
  Vec3 lo_, cell_;
  std::array<int, 3> dims_{};
  std::vector<std::vector<int>> buckets_;
};

/// Local tet edges as vertex-index pairs.
inline constexpr int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

/// Gmsh MSH 2.2 ASCII with physical tags 1 BODY, 2 SHELL, 11 INTERFACE,
/// 12 SPHERE. Throws MeshError with the violated invariant.
TetMesh load_mesh(const std::string &path, double R);

struct SurfaceQuadrature {
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<Vec3> normals;
  std::vector<int> facet;                    // index into TetMesh::facets()
  std::vector<std::array<double, 3>> bary;   // facet barycentric coordinates
  std::size_t size() const { return points.size(); }
  double total_weight() const;
};

SurfaceQuadrature surface_quadrature(const TetMesh &mesh, FacetTag tag, int order);

/// Same as surface_quadrature, but every facet is split into 4^levels
/// congruent subtriangles before the rule is applied.
SurfaceQuadrature refined_surface_quadrature(const TetMesh &mesh, FacetTag tag, int order,
                                             int levels);

/// Facets are split recursively while a piece is larger than half its
/// distance to `focus` (at most max_levels times); for nearly singular
/// integrands centered at `focus`.
SurfaceQuadrature focused_surface_quadrature(const TetMesh &mesh, FacetTag tag, int order,
                                             const Vec3 &focus, int max_levels = 7);

struct ProbeSequence {
  Vec3 anchor;
  Vec3 normal;
  double delta = 0.0;
  std::vector<Vec3> exterior; // z_j, j = 1..J
  std::vector<Vec3> interior; // y_j
};

ProbeSequence probe_points(const Vec3 &anchor, const Vec3 &nu, double delta, int J,
                           const TetMesh &mesh);

/// Barycentric gradients of a tetrahedron and its signed volume.
struct TetGeometry {
  std::array<Vec3, 4> x;
  std::array<Vec3, 4> grad;
  double volume = 0.0;
};
TetGeometry tet_geometry(const TetMesh &mesh, int t);
TetGeometry tet_geometry(const std::array<Vec3, 4> &x);

} // namespace emel
