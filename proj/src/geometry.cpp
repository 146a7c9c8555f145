#include "emel/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace emel {
namespace {

long long face_key(std::array<int, 3> f) {
  std::sort(f.begin(), f.end());
  return static_cast<long long>(f[0]) | (static_cast<long long>(f[1]) << 21) |
         (static_cast<long long>(f[2]) << 42);
}

long long edge_key(int a, int b) {
  if (a > b)
    std::swap(a, b);
  return static_cast<long long>(a) | (static_cast<long long>(b) << 32);
}

constexpr int kTetFaces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection).
Vec3 closest_on_triangle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0)
    return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3)
    return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0)
    return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6)
    return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0)
    return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

std::string tag_name(FacetTag t) { return t == FacetTag::Interface ? "INTERFACE" : "SPHERE"; }

} // namespace

TetGeometry tet_geometry(const std::array<Vec3, 4> &x) {
  TetGeometry g;
  g.x = x;
  Mat3 J;
  J.col(0) = x[1] - x[0];
  J.col(1) = x[2] - x[0];
  J.col(2) = x[3] - x[0];
  g.volume = J.determinant() / 6.0;
  const Mat3 Jinv = J.inverse();
  g.grad[1] = Jinv.row(0).transpose();
  g.grad[2] = Jinv.row(1).transpose();
  g.grad[3] = Jinv.row(2).transpose();
  g.grad[0] = -(g.grad[1] + g.grad[2] + g.grad[3]);
  return g;
}

TetGeometry tet_geometry(const TetMesh &mesh, int t) {
  const auto &tv = mesh.tets()[static_cast<std::size_t>(t)];
  const auto &V = mesh.vertices();
  return tet_geometry({V[tv[0]], V[tv[1]], V[tv[2]], V[tv[3]]});
}

TetMesh TetMesh::from_data(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets,
                           std::vector<Region> regions,
                           std::vector<std::pair<std::array<int, 3>, FacetTag>> facets,
                           double R) {
  if (!(R > 0.0))
    throw MeshError("truncation radius R must be positive");
  if (tets.size() != regions.size())
    throw MeshError("tet/region count mismatch");
  TetMesh m;
  m.vertices_ = std::move(vertices);
  m.tets_ = std::move(tets);
  m.regions_ = std::move(regions);
  m.R_ = R;
  const int nv = static_cast<int>(m.vertices_.size());
  if (nv >= (1 << 21))
    throw MeshError("too many vertices for face hashing");

  for (std::size_t t = 0; t < m.tets_.size(); ++t) {
    for (int v : m.tets_[t])
      if (v < 0 || v >= nv)
        throw MeshError("tet " + std::to_string(t) + " references a missing vertex");
    const double vol = m.tet_volume(static_cast<int>(t));
    const double d = m.tet_diameter(static_cast<int>(t));
    if (!(vol > 1e-12 * d * d * d))
      throw MeshError("inverted tet " + std::to_string(t) + " (non-positive volume " +
                      std::to_string(vol) + ")");
    m.h_max_ = std::max(m.h_max_, d);
  }

  // face -> adjacent tets
  std::unordered_map<long long, std::vector<int>> face_tets;
  face_tets.reserve(m.tets_.size() * 3);
  for (std::size_t t = 0; t < m.tets_.size(); ++t)
    for (const auto &lf : kTetFaces) {
      const auto &tv = m.tets_[t];
      auto &list = face_tets[face_key({tv[lf[0]], tv[lf[1]], tv[lf[2]]})];
      list.push_back(static_cast<int>(t));
      if (list.size() > 2)
        throw MeshError("face shared by more than two tets");
    }

  std::unordered_map<long long, FacetTag> tagged;
  for (std::size_t k = 0; k < facets.size(); ++k) {
    const auto &[fv, tag] = facets[k];
    for (int v : fv)
      if (v < 0 || v >= nv)
        throw MeshError("facet " + std::to_string(k) + " references a missing vertex");
    const long long key = face_key(fv);
    if (!tagged.emplace(key, tag).second)
      throw MeshError("duplicate boundary facet " + std::to_string(k));
    auto it = face_tets.find(key);
    if (it == face_tets.end())
      throw MeshError(tag_name(tag) + " facet " + std::to_string(k) +
                      " is not a face of any tet");
    const auto &adj = it->second;
    Facet f;
    f.v = fv;
    f.tag = tag;
    if (tag == FacetTag::Interface) {
      int nb = 0, ns = 0;
      for (int t : adj) {
        if (m.regions_[static_cast<std::size_t>(t)] == Region::Body) {
          ++nb;
          f.body_tet = t;
        } else {
          ++ns;
          f.shell_tet = t;
        }
      }
      if (nb != 1 || ns != 1)
        throw MeshError("non-conforming interface: INTERFACE facet " + std::to_string(k) +
                        " must be shared by exactly one BODY and one SHELL tet");
    } else {
      if (adj.size() != 1 || m.regions_[static_cast<std::size_t>(adj[0])] != Region::Shell)
        throw MeshError("SPHERE facet " + std::to_string(k) +
                        " must bound exactly one SHELL tet");
      f.shell_tet = adj[0];
    }
    const Vec3 &a = m.vertices_[fv[0]], &b = m.vertices_[fv[1]], &c = m.vertices_[fv[2]];
    Vec3 n = (b - a).cross(c - a);
    f.area = 0.5 * n.norm();
    n.normalize();
    // orient: away from the body tet on INTERFACE, away from the shell on SPHERE
    const int inner = tag == FacetTag::Interface ? f.body_tet : f.shell_tet;
    const auto &iv = m.tets_[static_cast<std::size_t>(inner)];
    Vec3 centroid = Vec3::Zero();
    for (int v : iv)
      centroid += m.vertices_[v];
    centroid /= 4.0;
    if (n.dot(centroid - a) > 0.0) {
      n = -n;
      std::swap(f.v[1], f.v[2]);
    }
    f.normal = n;
    if (tag == FacetTag::Sphere) {
      const double h = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
      for (int v : fv) {
        const double off = std::abs(m.vertices_[v].norm() - R);
        if (off > 10.0 * h * h)
          throw MeshError("SPHERE facet " + std::to_string(k) + " is off |x| = R by " +
                          std::to_string(off) + " > 10 h^2");
      }
    }
    m.facets_.push_back(f);
  }

  for (const auto &[key, adj] : face_tets) {
    const auto it = tagged.find(key);
    if (adj.size() == 2) {
      const bool mixed = m.regions_[static_cast<std::size_t>(adj[0])] !=
                         m.regions_[static_cast<std::size_t>(adj[1])];
      if (mixed && it == tagged.end())
        throw MeshError("open boundary: BODY/SHELL face missing from INTERFACE");
      if (!mixed && it != tagged.end())
        throw MeshError("tagged facet inside a single region");
    } else if (it == tagged.end()) {
      throw MeshError(
          std::string("open boundary: ") +
          (m.regions_[static_cast<std::size_t>(adj[0])] == Region::Body ? "BODY" : "SHELL") +
          " boundary face carries no facet tag");
    }
  }

  // watertightness of each region boundary
  for (Region r : {Region::Body, Region::Shell}) {
    std::unordered_map<long long, int> edge_count;
    for (const auto &f : m.facets_) {
      if (r == Region::Body && f.tag != FacetTag::Interface)
        continue;
      for (int e = 0; e < 3; ++e)
        ++edge_count[edge_key(f.v[e], f.v[(e + 1) % 3])];
    }
    for (const auto &[key, c] : edge_count)
      if (c != 2)
        throw MeshError(std::string("open boundary: ") + (r == Region::Body ? "BODY" : "SHELL") +
                        " boundary edge shared by " + std::to_string(c) + " facets");
  }

  if (m.count(Region::Body) == 0 || m.count(Region::Shell) == 0)
    throw MeshError("mesh needs both BODY and SHELL tets");
  if (m.count(FacetTag::Interface) == 0 || m.count(FacetTag::Sphere) == 0)
    throw MeshError("mesh needs INTERFACE and SPHERE facets");

  m.build_edges();
  m.build_locator();
  return m;
}

void TetMesh::build_edges() {
  tet_edges_.resize(tets_.size());
  for (std::size_t t = 0; t < tets_.size(); ++t)
    for (int e = 0; e < 6; ++e) {
      int a = tets_[t][kTetEdges[e][0]], b = tets_[t][kTetEdges[e][1]];
      if (a > b)
        std::swap(a, b);
      auto [it, inserted] = edge_lookup_.emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted)
        edges_.push_back({a, b});
      tet_edges_[t][e] = it->second;
    }
}

int TetMesh::edge_index(int a, int b) const {
  const auto it = edge_lookup_.find(edge_key(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

void TetMesh::build_locator() {
  Vec3 lo = vertices_[0], hi = vertices_[0];
  for (const auto &v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vec3 ext = (hi - lo).cwiseMax(1e-12);
  const double target = std::cbrt(std::max<double>(1.0, static_cast<double>(tets_.size()) / 2.0));
  const double edge = std::cbrt(ext.prod()) / target;
  for (int d = 0; d < 3; ++d)
    dims_[d] = std::max(1, static_cast<int>(std::ceil(ext(d) / edge)));
  lo_ = lo;
  cell_ = Vec3(ext(0) / dims_[0], ext(1) / dims_[1], ext(2) / dims_[2]);
  buckets_.assign(static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]), {});
  auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    Vec3 a = vertices_[tets_[t][0]], b = a;
    for (int v : tets_[t]) {
      a = a.cwiseMin(vertices_[v]);
      b = b.cwiseMax(vertices_[v]);
    }
    std::array<int, 3> i0, i1;
    for (int d = 0; d < 3; ++d) {
      i0[d] = clampi(static_cast<int>(std::floor((a(d) - lo_(d)) / cell_(d))), dims_[d]);
      i1[d] = clampi(static_cast<int>(std::floor((b(d) - lo_(d)) / cell_(d))), dims_[d]);
    }
    for (int i = i0[0]; i <= i1[0]; ++i)
      for (int j = i0[1]; j <= i1[1]; ++j)
        for (int k = i0[2]; k <= i1[2]; ++k)
          buckets_[static_cast<std::size_t>((i * dims_[1] + j) * dims_[2] + k)].push_back(
              static_cast<int>(t));
  }
}

std::optional<PointLocation> TetMesh::locate(const Vec3 &x) const {
  std::array<int, 3> idx;
  for (int d = 0; d < 3; ++d) {
    const int i = static_cast<int>(std::floor((x(d) - lo_(d)) / cell_(d)));
    if (i < -1 || i > dims_[d])
      return std::nullopt;
    idx[d] = std::clamp(i, 0, dims_[d] - 1);
  }
  const auto &bucket =
      buckets_[static_cast<std::size_t>((idx[0] * dims_[1] + idx[1]) * dims_[2] + idx[2])];
  // signed-volume tolerance 1e-12 h^3 expressed in barycentric units
  std::optional<PointLocation> best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (int t : bucket) {
    const auto g = tet_geometry(*this, t);
    PointLocation loc;
    loc.tet = t;
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
      loc.bary[i] = 1.0 + g.grad[i].dot(x - g.x[i]);
    for (double b : loc.bary)
      mn = std::min(mn, b);
    const double d = tet_diameter(t);
    const double tol = 1e-12 * d * d * d / std::max(g.volume, 1e-300);
    if (mn >= -tol && mn > best_min) {
      best_min = mn;
      best = loc;
    }
  }
  return best;
}

std::optional<Region> TetMesh::region_of(const Vec3 &x) const {
  const auto loc = locate(x);
  if (!loc)
    return std::nullopt;
  return regions_[static_cast<std::size_t>(loc->tet)];
}

double TetMesh::tet_volume(int t) const {
  const auto &tv = tets_[static_cast<std::size_t>(t)];
  const Vec3 &a = vertices_[tv[0]];
  return (vertices_[tv[1]] - a).cross(vertices_[tv[2]] - a).dot(vertices_[tv[3]] - a) / 6.0;
}

double TetMesh::tet_diameter(int t) const {
  const auto &tv = tets_[static_cast<std::size_t>(t)];
  double d = 0.0;
  for (const auto &e : kTetEdges)
    d = std::max(d, (vertices_[tv[e[0]]] - vertices_[tv[e[1]]]).norm());
  return d;
}

std::size_t TetMesh::count(Region r) const {
  return static_cast<std::size_t>(std::count(regions_.begin(), regions_.end(), r));
}

std::size_t TetMesh::count(FacetTag tag) const {
  return static_cast<std::size_t>(
      std::count_if(facets_.begin(), facets_.end(), [tag](const Facet &f) { return f.tag == tag; }));
}

double TetMesh::distance_to(FacetTag tag, const Vec3 &x, int *facet) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < facets_.size(); ++k) {
    const auto &f = facets_[k];
    if (f.tag != tag)
      continue;
    const Vec3 c = closest_on_triangle(x, vertices_[f.v[0]], vertices_[f.v[1]], vertices_[f.v[2]]);
    const double d = (x - c).norm();
    if (d < best) {
      best = d;
      if (facet)
        *facet = static_cast<int>(k);
    }
  }
  return best;
}

double TetMesh::local_h(FacetTag tag, const Vec3 &x) const {
  int k = -1;
  distance_to(tag, x, &k);
  if (k < 0)
    return h_max_;
  const auto &f = facets_[static_cast<std::size_t>(k)];
  const Vec3 &a = vertices_[f.v[0]], &b = vertices_[f.v[1]], &c = vertices_[f.v[2]];
  return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
}

std::string TetMesh::report() const {
  double area_i = 0.0, area_s = 0.0;
  for (const auto &f : facets_)
    (f.tag == FacetTag::Interface ? area_i : area_s) += f.area;
  std::ostringstream os;
  os << "vertices: " << vertices_.size() << "\n"
     << "tets: " << tets_.size() << " (BODY " << count(Region::Body) << ", SHELL "
     << count(Region::Shell) << ")\n"
     << "edges: " << edges_.size() << "\n"
     << "facets: INTERFACE " << count(FacetTag::Interface) << ", SPHERE "
     << count(FacetTag::Sphere) << "\n"
     << "h_max: " << h_max_ << "\n"
     << "area(INTERFACE): " << area_i << "\n"
     << "area(SPHERE): " << area_s << " (R = " << R_ << ")\n";
  return os.str();
}

TetMesh load_mesh(const std::string &path, double R) {
  std::ifstream in(path);
  if (!in)
    throw MeshError("cannot open mesh file " + path);
  std::vector<Vec3> vertices;
  std::unordered_map<long long, int> node_index;
  std::vector<std::array<int, 4>> tets;
  std::vector<Region> regions;
  std::vector<std::pair<std::array<int, 3>, FacetTag>> facets;

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &msg) {
    throw MeshError(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto next = [&]() -> std::string & {
    if (!std::getline(in, line))
      fail("unexpected end of file");
    ++lineno;
    return line;
  };
  bool have_format = false, have_nodes = false, have_elements = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::istringstream fs(next());
      std::string version;
      int file_type = -1;
      fs >> version >> file_type;
      if (version.rfind("2.", 0) != 0 || file_type != 0)
        fail("only MSH 2.2 ASCII is supported (found version " + version + ")");
      have_format = true;
    } else if (line.rfind("$Nodes", 0) == 0) {
      const long n = std::stol(next());
      vertices.reserve(static_cast<std::size_t>(n));
      for (long i = 0; i < n; ++i) {
        std::istringstream ns(next());
        long long id;
        double x, y, z;
        if (!(ns >> id >> x >> y >> z))
          fail("malformed node record");
        node_index[id] = static_cast<int>(vertices.size());
        vertices.emplace_back(x, y, z);
      }
      have_nodes = true;
    } else if (line.rfind("$Elements", 0) == 0) {
      if (!have_nodes)
        fail("$Elements before $Nodes");
      const long n = std::stol(next());
      for (long i = 0; i < n; ++i) {
        std::istringstream es(next());
        long long id;
        int type, ntags;
        if (!(es >> id >> type >> ntags))
          fail("malformed element record");
        std::vector<long long> tags(static_cast<std::size_t>(ntags));
        for (auto &t : tags)
          es >> t;
        const int physical = ntags > 0 ? static_cast<int>(tags[0]) : 0;
        auto read_nodes = [&](int count) {
          std::vector<int> v(static_cast<std::size_t>(count));
          for (auto &x : v) {
            long long nid;
            if (!(es >> nid))
              fail("malformed element node list");
            const auto it = node_index.find(nid);
            if (it == node_index.end())
              fail("element references unknown node " + std::to_string(nid));
            x = it->second;
          }
          return v;
        };
        if (type == 4) {
          const auto v = read_nodes(4);
          if (physical != 1 && physical != 2)
            fail("tet with physical tag " + std::to_string(physical) + " (expected 1 or 2)");
          tets.push_back({v[0], v[1], v[2], v[3]});
          regions.push_back(physical == 1 ? Region::Body : Region::Shell);
        } else if (type == 2) {
          const auto v = read_nodes(3);
          if (physical != 11 && physical != 12)
            fail("triangle with physical tag " + std::to_string(physical) +
                 " (expected 11 or 12)");
          facets.push_back({{v[0], v[1], v[2]},
                            physical == 11 ? FacetTag::Interface : FacetTag::Sphere});
        }
      }
      have_elements = true;
    }
  }
  if (!have_format || !have_nodes || !have_elements)
    throw MeshError(path + ": missing $MeshFormat, $Nodes or $Elements section");
  return TetMesh::from_data(std::move(vertices), std::move(tets), std::move(regions),
                            std::move(facets), R);
}

double SurfaceQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights)
    s += w;
  return s;
}

SurfaceQuadrature refined_surface_quadrature(const TetMesh &mesh, FacetTag tag, int order,
                                             int levels) {
  const auto &rule = triangle_rule(order);
  // sub-triangles of the reference triangle in barycentric coordinates
  using Tri = std::array<Eigen::Vector3d, 3>;
  std::vector<Tri> subs{{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
                         Eigen::Vector3d(0, 0, 1)}};
  for (int l = 0; l < levels; ++l) {
    std::vector<Tri> next;
    next.reserve(subs.size() * 4);
    for (const auto &t : subs) {
      const Eigen::Vector3d m01 = 0.5 * (t[0] + t[1]), m12 = 0.5 * (t[1] + t[2]),
                            m20 = 0.5 * (t[2] + t[0]);
      next.push_back({t[0], m01, m20});
      next.push_back({m01, t[1], m12});
      next.push_back({m20, m12, t[2]});
      next.push_back({m01, m12, m20});
    }
    subs = std::move(next);
  }
  const double scale = 1.0 / static_cast<double>(subs.size());
  SurfaceQuadrature q;
  const auto &F = mesh.facets();
  const auto &V = mesh.vertices();
  for (std::size_t k = 0; k < F.size(); ++k) {
    const auto &f = F[k];
    if (f.tag != tag)
      continue;
    for (const auto &s : subs)
      for (std::size_t p = 0; p < rule.weights.size(); ++p) {
        const Eigen::Vector3d b =
            rule.bary[p][0] * s[0] + rule.bary[p][1] * s[1] + rule.bary[p][2] * s[2];
        q.points.push_back(b(0) * V[f.v[0]] + b(1) * V[f.v[1]] + b(2) * V[f.v[2]]);
        q.weights.push_back(f.area * rule.weights[p] * scale);
        q.normals.push_back(f.normal);
        q.facet.push_back(static_cast<int>(k));
        q.bary.push_back({b(0), b(1), b(2)});
      }
  }
  return q;
}

namespace {

void focused_split(const std::array<Eigen::Vector3d, 3> &t, const std::array<Vec3, 3> &X,
                   const Vec3 &focus, int depth, int max_levels,
                   std::vector<std::array<Eigen::Vector3d, 3>> &out) {
  std::array<Vec3, 3> p;
  for (int c = 0; c < 3; ++c)
    p[c] = t[c](0) * X[0] + t[c](1) * X[1] + t[c](2) * X[2];
  const double diam =
      std::max({(p[0] - p[1]).norm(), (p[1] - p[2]).norm(), (p[2] - p[0]).norm()});
  const double dist = (focus - closest_on_triangle(focus, p[0], p[1], p[2])).norm();
  if (depth >= max_levels || diam <= 0.5 * dist) {
    out.push_back(t);
    return;
  }
  const Eigen::Vector3d m01 = 0.5 * (t[0] + t[1]), m12 = 0.5 * (t[1] + t[2]),
                        m20 = 0.5 * (t[2] + t[0]);
  focused_split({t[0], m01, m20}, X, focus, depth + 1, max_levels, out);
  focused_split({m01, t[1], m12}, X, focus, depth + 1, max_levels, out);
  focused_split({m20, m12, t[2]}, X, focus, depth + 1, max_levels, out);
  focused_split({m01, m12, m20}, X, focus, depth + 1, max_levels, out);
}

} // namespace

SurfaceQuadrature focused_surface_quadrature(const TetMesh &mesh, FacetTag tag, int order,
                                             const Vec3 &focus, int max_levels) {
  const auto &rule = triangle_rule(order);
  const auto &F = mesh.facets();
  const auto &V = mesh.vertices();
  SurfaceQuadrature q;
  std::vector<std::array<Eigen::Vector3d, 3>> subs;
  for (std::size_t k = 0; k < F.size(); ++k) {
    const auto &f = F[k];
    if (f.tag != tag)
      continue;
    const std::array<Vec3, 3> X{V[f.v[0]], V[f.v[1]], V[f.v[2]]};
    subs.clear();
    focused_split({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)},
                  X, focus, 0, max_levels, subs);
    for (const auto &s : subs) {
      // area fraction of the sub-triangle in barycentric space
      const double frac = std::abs((s[1] - s[0]).cross(s[2] - s[0]).sum()) / 3.0;
      for (std::size_t p = 0; p < rule.weights.size(); ++p) {
        const Eigen::Vector3d b =
            rule.bary[p][0] * s[0] + rule.bary[p][1] * s[1] + rule.bary[p][2] * s[2];
        q.points.push_back(b(0) * X[0] + b(1) * X[1] + b(2) * X[2]);
        q.weights.push_back(f.area * rule.weights[p] * frac);
        q.normals.push_back(f.normal);
        q.facet.push_back(static_cast<int>(k));
        q.bary.push_back({b(0), b(1), b(2)});
      }
    }
  }
  return q;
}

SurfaceQuadrature surface_quadrature(const TetMesh &mesh, FacetTag tag, int order) {
  if (tag != FacetTag::Interface && tag != FacetTag::Sphere)
    throw MeshError("unknown facet tag");
  return refined_surface_quadrature(mesh, tag, order, 0);
}

ProbeSequence probe_points(const Vec3 &anchor, const Vec3 &nu, double delta, int J,
                           const TetMesh &mesh) {
  if (J < 1)
    throw Error("probe count J must be >= 1");
  if (!(delta > 0.0))
    throw Error("probe offset delta must be positive");
  if (std::abs(nu.norm() - 1.0) > 1e-10)
    throw Error("probe normal must be a unit vector");
  const double dist = mesh.distance_to(FacetTag::Interface, anchor);
  if (dist > mesh.local_h(FacetTag::Interface, anchor))
    throw Error("probe anchor is not on the INTERFACE (distance " + std::to_string(dist) + ")");
  ProbeSequence s;
  s.anchor = anchor;
  s.normal = nu;
  s.delta = delta;
  for (int j = 1; j <= J; ++j) {
    const Vec3 z = anchor + (delta / j) * nu;
    const Vec3 y = anchor - (delta / j) * nu;
    const auto rz = mesh.region_of(z);
    const auto ry = mesh.region_of(y);
    if (!rz || *rz != Region::Shell || !ry || *ry != Region::Body)
      throw Error("delta too large: probe pair j=" + std::to_string(j) +
                  " leaves the SHELL/BODY regions");
    s.exterior.push_back(z);
    s.interior.push_back(y);
  }
  return s;
}

} // namespace emel
