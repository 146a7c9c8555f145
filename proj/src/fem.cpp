#include "emel/fem.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace emel {
namespace {

// Runs fn(item, out) over [0, n) in `threads` contiguous chunks and
// concatenates the chunk outputs in chunk order, so the triplet sequence does
// not depend on the thread count.
template <class Fn>
std::vector<Triplet> parallel_triplets(std::size_t n, int threads, Fn fn) {
  const std::size_t nt = static_cast<std::size_t>(std::max(1, threads));
  std::vector<std::vector<Triplet>> parts(nt);
  auto work = [&](std::size_t c) {
    const std::size_t lo = n * c / nt, hi = n * (c + 1) / nt;
    for (std::size_t i = lo; i < hi; ++i)
      fn(i, parts[c]);
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t c = 0; c < nt; ++c)
      pool.emplace_back(work, c);
    for (auto &t : pool)
      t.join();
  }
  std::vector<Triplet> all;
  std::size_t total = 0;
  for (const auto &p : parts)
    total += p.size();
  all.reserve(total);
  for (auto &p : parts)
    all.insert(all.end(), p.begin(), p.end());
  return all;
}

double edge_sign(const std::array<int, 4> &tv, int e) {
  return tv[kTetEdges[e][0]] < tv[kTetEdges[e][1]] ? 1.0 : -1.0;
}

int h_tet_of(const Facet &f, Region r) { return r == Region::Shell ? f.shell_tet : f.body_tet; }

// local edges of `tet` lying in facet f
std::vector<int> facet_edges(const TetMesh &mesh, const Facet &f, int tet) {
  const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
  auto in_facet = [&f](int v) { return v == f.v[0] || v == f.v[1] || v == f.v[2]; };
  std::vector<int> out;
  for (int e = 0; e < 6; ++e)
    if (in_facet(tv[kTetEdges[e][0]]) && in_facet(tv[kTetEdges[e][1]]))
      out.push_back(e);
  return out;
}

} // namespace

VectorNodalSpace::VectorNodalSpace(const TetMesh &mesh, Region region) : region_(region) {
  local_.assign(mesh.vertices().size(), -1);
  for (std::size_t t = 0; t < mesh.tets().size(); ++t) {
    if (mesh.regions()[t] != region)
      continue;
    tets_.push_back(static_cast<int>(t));
    for (int v : mesh.tets()[t])
      if (local_[static_cast<std::size_t>(v)] < 0) {
        local_[static_cast<std::size_t>(v)] = 0;
        vertices_.push_back(v);
      }
  }
  std::sort(vertices_.begin(), vertices_.end());
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    local_[static_cast<std::size_t>(vertices_[i])] = static_cast<int>(i);
}

EdgeSpace::EdgeSpace(const TetMesh &mesh, Region region) : region_(region) {
  local_.assign(mesh.edges().size(), -1);
  for (std::size_t t = 0; t < mesh.tets().size(); ++t) {
    if (mesh.regions()[t] != region)
      continue;
    tets_.push_back(static_cast<int>(t));
    for (int e : mesh.tet_edges()[t])
      if (local_[static_cast<std::size_t>(e)] < 0) {
        local_[static_cast<std::size_t>(e)] = 0;
        edges_.push_back(e);
      }
  }
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 0; i < edges_.size(); ++i)
    local_[static_cast<std::size_t>(edges_[i])] = static_cast<int>(i);
}

std::array<Vec3, 6> nedelec_values(const TetGeometry &g, const std::array<int, 4> &tv,
                                   const std::array<double, 4> &bary) {
  std::array<Vec3, 6> N;
  for (int e = 0; e < 6; ++e) {
    const int i = kTetEdges[e][0], j = kTetEdges[e][1];
    N[e] = edge_sign(tv, e) * (bary[i] * g.grad[j] - bary[j] * g.grad[i]);
  }
  return N;
}

std::array<Vec3, 6> nedelec_curls(const TetGeometry &g, const std::array<int, 4> &tv) {
  std::array<Vec3, 6> c;
  for (int e = 0; e < 6; ++e) {
    const int i = kTetEdges[e][0], j = kTetEdges[e][1];
    c[e] = edge_sign(tv, e) * 2.0 * g.grad[i].cross(g.grad[j]);
  }
  return c;
}

Eigen::Matrix<double, 6, 6> edge_curlcurl_matrix(const TetGeometry &g,
                                                 const std::array<int, 4> &tv) {
  const auto c = nedelec_curls(g, tv);
  Eigen::Matrix<double, 6, 6> K;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      K(a, b) = g.volume * c[a].dot(c[b]);
  return K;
}

Eigen::Matrix<double, 6, 6> edge_mass_matrix(const TetGeometry &g, const std::array<int, 4> &tv) {
  // integral of lambda_p lambda_q = vol (1 + delta_pq) / 20
  auto ll = [&g](int p, int q) { return g.volume * (p == q ? 2.0 : 1.0) / 20.0; };
  Eigen::Matrix<double, 6, 6> M;
  for (int a = 0; a < 6; ++a) {
    const int i = kTetEdges[a][0], j = kTetEdges[a][1];
    for (int b = 0; b < 6; ++b) {
      const int k = kTetEdges[b][0], l = kTetEdges[b][1];
      const double v = ll(i, k) * g.grad[j].dot(g.grad[l]) - ll(i, l) * g.grad[j].dot(g.grad[k]) -
                       ll(j, k) * g.grad[i].dot(g.grad[l]) + ll(j, l) * g.grad[i].dot(g.grad[k]);
      M(a, b) = edge_sign(tv, a) * edge_sign(tv, b) * v;
    }
  }
  return M;
}

Eigen::Matrix<double, 12, 12> elastic_stiffness_matrix(const TetGeometry &g,
                                                       const StiffnessTensor &C) {
  Eigen::Matrix<double, 12, 12> K;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 3; ++i)
      for (int b = 0; b < 4; ++b)
        for (int k = 0; k < 3; ++k) {
          double s = 0.0;
          for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
              s += C(i, j, k, l) * g.grad[a](j) * g.grad[b](l);
          K(3 * a + i, 3 * b + k) = g.volume * s;
        }
  return K;
}

Eigen::Matrix4d p1_mass_matrix(const TetGeometry &g) {
  Eigen::Matrix4d M = Eigen::Matrix4d::Constant(g.volume / 20.0);
  M.diagonal().array() = g.volume / 10.0;
  return M;
}

std::array<double, 4> facet_to_tet_bary(const TetMesh &mesh, const Facet &f, int tet,
                                        const std::array<double, 3> &fb) {
  const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
  std::array<double, 4> b{0.0, 0.0, 0.0, 0.0};
  for (int c = 0; c < 3; ++c) {
    const auto it = std::find(tv.begin(), tv.end(), f.v[c]);
    if (it == tv.end())
      throw MeshError("facet vertex not in adjacent tet");
    b[static_cast<std::size_t>(it - tv.begin())] = fb[c];
  }
  return b;
}

CVector CoupledSystem::apply(const CVector &x) const {
  CVector y = A * x;
  if (!dtn.empty()) {
    CVector xs(static_cast<Eigen::Index>(dtn.dofs.size()));
    for (std::size_t i = 0; i < dtn.dofs.size(); ++i)
      xs(static_cast<Eigen::Index>(i)) = x(dtn.dofs[i]);
    const CVector ys = dtn.L * (dtn.W * (dtn.P * xs));
    for (std::size_t i = 0; i < dtn.dofs.size(); ++i)
      y(dtn.dofs[i]) += ys(static_cast<Eigen::Index>(i));
  }
  return y;
}

Eigen::MatrixXcd CoupledSystem::dense() const {
  Eigen::MatrixXcd M = Eigen::MatrixXcd(A);
  if (!dtn.empty()) {
    const Eigen::MatrixXcd LR = dtn.L * dtn.W * dtn.P;
    for (std::size_t i = 0; i < dtn.dofs.size(); ++i)
      for (std::size_t j = 0; j < dtn.dofs.size(); ++j)
        M(dtn.dofs[i], dtn.dofs[j]) +=
            LR(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return M;
}

namespace {

// Elastic block a * (E - m * rho M) over the tets of the nodal space.
void add_elastic_block(const TetMesh &mesh, const VectorNodalSpace &U, const StiffnessTensor &C,
                       const std::function<double(std::size_t)> &mass_coeff, Complex a,
                       int threads, std::vector<Triplet> &out) {
  const auto &tets = U.tets();
  auto part = parallel_triplets(tets.size(), threads, [&](std::size_t i, std::vector<Triplet> &t) {
    const int tet = tets[i];
    const auto g = tet_geometry(mesh, tet);
    const auto K = elastic_stiffness_matrix(g, C);
    const auto M = p1_mass_matrix(g);
    const double mc = mass_coeff(i);
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    for (int p = 0; p < 4; ++p)
      for (int i3 = 0; i3 < 3; ++i3)
        for (int q = 0; q < 4; ++q)
          for (int k3 = 0; k3 < 3; ++k3) {
            double v = K(3 * p + i3, 3 * q + k3);
            if (i3 == k3)
              v += mc * M(p, q);
            t.emplace_back(3 * U.local_vertex(tv[p]) + i3, 3 * U.local_vertex(tv[q]) + k3, a * v);
          }
  });
  out.insert(out.end(), part.begin(), part.end());
}

// Edge block a * K + b * M over the tets of the edge space.
void add_edge_block(const TetMesh &mesh, const EdgeSpace &H, const BlockLayout &lay, Complex a,
                    Complex b, int threads, std::vector<Triplet> &out) {
  const auto &tets = H.tets();
  auto part = parallel_triplets(tets.size(), threads, [&](std::size_t i, std::vector<Triplet> &t) {
    const int tet = tets[i];
    const auto g = tet_geometry(mesh, tet);
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    const auto K = edge_curlcurl_matrix(g, tv);
    const auto M = edge_mass_matrix(g, tv);
    const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
    for (int p = 0; p < 6; ++p)
      for (int q = 0; q < 6; ++q)
        t.emplace_back(lay.H(H.local_edge(te[p])), lay.H(H.local_edge(te[q])),
                       a * K(p, q) + b * M(p, q));
  });
  out.insert(out.end(), part.begin(), part.end());
}

// Interface pairings: cu * int (nu x H).v (row u, col H) and
// ch * int (nu x w).u (row H, col u).
void add_interface_coupling(const TetMesh &mesh, const VectorNodalSpace &U, const EdgeSpace &H,
                            const BlockLayout &lay, Complex cu, Complex ch, int order,
                            std::vector<Triplet> &out) {
  const auto &rule = triangle_rule(order);
  for (const auto &f : mesh.facets()) {
    if (f.tag != FacetTag::Interface)
      continue;
    const int tet = h_tet_of(f, H.region());
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    const auto g = tet_geometry(mesh, tet);
    const auto edges = facet_edges(mesh, f, tet);
    const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double w = f.area * rule.weights[q];
      const auto tb = facet_to_tet_bary(mesh, f, tet, rule.bary[q]);
      const auto N = nedelec_values(g, tv, tb);
      for (int e : edges) {
        const Vec3 nxN = f.normal.cross(N[e]);
        const int hd = lay.H(H.local_edge(te[e]));
        for (int c = 0; c < 3; ++c) {
          const int ud = 3 * U.local_vertex(f.v[c]);
          for (int k = 0; k < 3; ++k) {
            const double v = w * nxN(k) * rule.bary[q][c];
            out.emplace_back(ud + k, hd, cu * v);
            out.emplace_back(hd, ud + k, ch * v);
          }
        }
      }
    }
  }
}

} // namespace

CoupledSystem assemble_coupled(const TetMesh &mesh, const StiffnessTensor &C,
                               const MassDensityField &rho, const BackgroundMedium &medium,
                               const CouplingConstants &bc, const DtNOperator &dtn,
                               const AssemblyOptions &opts) {
  if (opts.check_admissibility)
    require_admissible(bc);
  else if (bc.b1 * bc.b2 == Complex(0.0))
    throw MaterialError("degenerate coupling: b1*b2 = 0");
  if (rho.size() != mesh.count(Region::Body))
    throw MaterialError("density field has " + std::to_string(rho.size()) +
                        " cells but the mesh has " + std::to_string(mesh.count(Region::Body)) +
                        " BODY tets");
  const double kappa = medium.kappa();
  const double omega = medium.omega();
  if (std::abs(dtn.kappa() - Complex(kappa)) > 1e-12 * kappa ||
      std::abs(dtn.radius() - mesh.radius()) > 1e-12 * mesh.radius())
    throw Error("DtN operator built for a different wave number or radius");

  CoupledSystem sys{VectorNodalSpace(mesh, Region::Body), EdgeSpace(mesh, Region::Shell), {}, {},
                    {}, {}};
  sys.layout.n_u = sys.u_space.ndofs();
  sys.layout.n_H = sys.h_space.ndofs();
  const auto &lay = sys.layout;
  const Complex ik = kI * kappa;
  const Complex alpha = -ik / (bc.b1 * std::conj(bc.b2));

  std::vector<Triplet> trip;
  add_elastic_block(
      mesh, sys.u_space, C, [&](std::size_t i) { return -omega * omega * rho[i]; }, alpha,
      opts.threads, trip);
  add_edge_block(mesh, sys.h_space, lay, -1.0, kappa * kappa, opts.threads, trip);
  if (opts.coupling)
    add_interface_coupling(mesh, sys.u_space, sys.h_space, lay, ik / std::conj(bc.b2),
                           ik / bc.b2, opts.interface_order, trip);

  // S_R: first-order term -ik xhat x (xhat x H) on all modes, plus the
  // low-rank correction (G_e - xhat x) on the modes n <= N.
  const int N = dtn.order();
  const int K = mode_count(N);
  const double R = mesh.radius();
  const auto &rule = triangle_rule(opts.sphere_order);
  std::vector<int> sphere_dofs;
  std::vector<int> dof_slot(static_cast<std::size_t>(lay.size()), -1);
  struct SpherePoint {
    std::vector<int> slots;
    std::vector<Vec3> N; // edge basis values at the flat point
    Vec3 xhat;
    double w;
  };
  std::vector<SpherePoint> pts;
  for (const auto &f : mesh.facets()) {
    if (f.tag != FacetTag::Sphere)
      continue;
    const int tet = f.shell_tet;
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    const auto g = tet_geometry(mesh, tet);
    const auto edges = facet_edges(mesh, f, tet);
    const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
    const auto &V = mesh.vertices();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto &fb = rule.bary[q];
      const Vec3 x = fb[0] * V[f.v[0]] + fb[1] * V[f.v[1]] + fb[2] * V[f.v[2]];
      const Vec3 xh = x.normalized();
      // radial projection of the flat facet onto S_R
      const double w = f.area * rule.weights[q] * R * R * xh.dot(f.normal) / x.squaredNorm();
      const auto Nv = nedelec_values(g, tv, facet_to_tet_bary(mesh, f, tet, fb));
      SpherePoint sp;
      sp.xhat = xh;
      sp.w = w;
      for (int e : edges) {
        const int d = lay.H(sys.h_space.local_edge(te[e]));
        if (dof_slot[static_cast<std::size_t>(d)] < 0) {
          dof_slot[static_cast<std::size_t>(d)] = static_cast<int>(sphere_dofs.size());
          sphere_dofs.push_back(d);
        }
        sp.slots.push_back(dof_slot[static_cast<std::size_t>(d)]);
        sp.N.push_back(Nv[e]);
      }
      for (std::size_t a = 0; a < sp.N.size(); ++a)
        for (std::size_t b = 0; b < sp.N.size(); ++b) {
          const double v = sp.N[b].dot(sp.N[a]) - xh.dot(sp.N[b]) * xh.dot(sp.N[a]);
          trip.emplace_back(sphere_dofs[static_cast<std::size_t>(sp.slots[a])],
                            sphere_dofs[static_cast<std::size_t>(sp.slots[b])], ik * w * v);
        }
      pts.push_back(std::move(sp));
    }
  }

  sys.A.resize(lay.size(), lay.size());
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();

  const auto m = static_cast<Eigen::Index>(sphere_dofs.size());
  sys.dtn.dofs = sphere_dofs;
  sys.dtn.L = Eigen::MatrixXcd::Zero(m, 2 * K);
  sys.dtn.P = Eigen::MatrixXcd::Zero(2 * K, m);
  std::vector<CVec3> U, Vh;
  for (const auto &sp : pts) {
    vector_spherical_harmonics_all(N, sp.xhat, U, Vh);
    for (std::size_t a = 0; a < sp.N.size(); ++a) {
      const CVec3 Nc = sp.N[a].cast<Complex>();
      const CVec3 xN = sp.xhat.cross(sp.N[a]).cast<Complex>();
      const auto s = sp.slots[a];
      for (int k = 0; k < K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        sys.dtn.L(s, k) += -ik * sp.w * bdot(U[kk], Nc) / R;
        sys.dtn.L(s, K + k) += -ik * sp.w * bdot(Vh[kk], Nc) / R;
        sys.dtn.P(k, s) += sp.w * bdot(xN, U[kk].conjugate()) / R;
        sys.dtn.P(K + k, s) += sp.w * bdot(xN, Vh[kk].conjugate()) / R;
      }
    }
  }
  sys.dtn.W = Eigen::MatrixXcd::Zero(2 * K, 2 * K);
  for (int n = 1; n <= N; ++n) {
    const Complex r = dtn.rho(n);
    for (int mm = -n; mm <= n; ++mm) {
      const int k = mode_index(n, mm);
      sys.dtn.W(k, K + k) = -kI / r + 1.0;
      sys.dtn.W(K + k, k) = -kI * r - 1.0;
    }
  }
  sys.rhs = CVector::Zero(lay.size());
  return sys;
}

CVector assemble_rhs(const TetMesh &mesh, const CoupledSystem &sys, const SurfaceQuadrature &quad,
                     const InterfaceData &data, const CouplingConstants &bc, double kappa) {
  if (data.f1.size() != quad.size() || data.f2.size() != quad.size())
    throw Error("interface data size does not match the quadrature");
  const Complex ik = kI * kappa;
  const Complex c1 = -ik / (bc.b1 * std::conj(bc.b2));
  const Complex c2 = -ik / bc.b2;
  const auto &lay = sys.layout;
  CVector F = CVector::Zero(lay.size());
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto &f = mesh.facets()[static_cast<std::size_t>(quad.facet[q])];
    if (f.tag != FacetTag::Interface)
      throw Error("right-hand side quadrature must live on the INTERFACE");
    const CVec3 &f1 = data.f1[q];
    const CVec3 &f2 = data.f2[q];
    if (std::abs(bdot(f2, quad.normals[q].cast<Complex>())) > 1e-8 * std::max(f2.norm(), 1e-300))
      throw Error("f2 is not tangential at quadrature point " + std::to_string(q));
    const double w = quad.weights[q];
    for (int c = 0; c < 3; ++c) {
      const int ud = 3 * sys.u_space.local_vertex(f.v[c]);
      for (int k = 0; k < 3; ++k)
        F(ud + k) += c1 * w * quad.bary[q][c] * f1(k);
    }
    const int tet = h_tet_of(f, sys.h_space.region());
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    const auto g = tet_geometry(mesh, tet);
    const auto N = nedelec_values(g, tv, facet_to_tet_bary(mesh, f, tet, quad.bary[q]));
    const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
    for (int e : facet_edges(mesh, f, tet))
      F(lay.H(sys.h_space.local_edge(te[e]))) += c2 * w * bdot(f2, N[e].cast<Complex>());
  }
  return F;
}

InterfaceData incident_traces(const IncidentField &inc, const SurfaceQuadrature &quad,
                              const CouplingConstants &bc, double kappa) {
  InterfaceData d;
  d.f1.resize(quad.size());
  d.f2.resize(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto fp = incident_field(quad.points[q], inc, kappa);
    const CVec3 nu = quad.normals[q].cast<Complex>();
    d.f1[q] = bc.b1 * cross(nu, fp.H);
    d.f2[q] = bc.b2 * cross(nu, fp.E);
  }
  return d;
}

CoupledSystem assemble_auxiliary(const TetMesh &mesh, const StiffnessTensor &C,
                                 const CouplingConstants &bc, double kappa,
                                 const VectorFunction &xi1, const VectorFunction &xi2,
                                 const TraceFunction &h1, const TraceFunction &h2,
                                 const AssemblyOptions &opts) {
  if (bc.b1 * bc.b2 == Complex(0.0))
    throw MaterialError("degenerate coupling: b1*b2 = 0");
  if (!((bc.b1 * std::conj(bc.b2)).imag() < 0.0))
    throw MaterialError("auxiliary problem requires Im(b1*conj(b2)) < 0");
  CoupledSystem sys{VectorNodalSpace(mesh, Region::Body), EdgeSpace(mesh, Region::Body), {}, {},
                    {}, {}};
  sys.layout.n_u = sys.u_space.ndofs();
  sys.layout.n_H = sys.h_space.ndofs();
  const auto &lay = sys.layout;
  const Complex ik = kI * kappa;
  const Complex alpha = -ik / (bc.b1 * std::conj(bc.b2));

  std::vector<Triplet> trip;
  add_elastic_block(mesh, sys.u_space, C, [](std::size_t) { return 1.0; }, alpha, opts.threads,
                    trip);
  add_edge_block(mesh, sys.h_space, lay, 1.0, 1.0, opts.threads, trip);
  if (opts.coupling)
    add_interface_coupling(mesh, sys.u_space, sys.h_space, lay, ik / std::conj(bc.b2),
                           ik / bc.b2, opts.interface_order, trip);
  sys.A.resize(lay.size(), lay.size());
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();

  // volume data: int xi1.w + (ik/(b1 conj b2)) xi2.v, degree-5 tet rule
  sys.rhs = CVector::Zero(lay.size());
  const auto tr = collapsed_tet_rule(4);
  for (int tet : sys.u_space.tets()) {
    const auto g = tet_geometry(mesh, tet);
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
    for (std::size_t q = 0; q < tr.weights.size(); ++q) {
      const auto &b = tr.bary[q];
      const Vec3 x = b[0] * g.x[0] + b[1] * g.x[1] + b[2] * g.x[2] + b[3] * g.x[3];
      const double w = g.volume * tr.weights[q];
      const CVec3 s1 = xi1(x), s2 = xi2(x);
      const auto N = nedelec_values(g, tv, b);
      for (int e = 0; e < 6; ++e)
        sys.rhs(lay.H(sys.h_space.local_edge(te[e]))) += w * bdot(s1, N[e].cast<Complex>());
      for (int p = 0; p < 4; ++p)
        for (int k = 0; k < 3; ++k)
          sys.rhs(3 * sys.u_space.local_vertex(tv[p]) + k) += (-alpha) * w * b[p] * s2(k);
    }
  }
  // boundary data: (-ik/(b1 conj b2)) <h1, v> - <h2, w>
  const auto quad = surface_quadrature(mesh, FacetTag::Interface, 4);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto &f = mesh.facets()[static_cast<std::size_t>(quad.facet[q])];
    const CVec3 v1 = h1(quad.points[q], quad.normals[q]);
    const CVec3 v2 = h2(quad.points[q], quad.normals[q]);
    const double w = quad.weights[q];
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k)
        sys.rhs(3 * sys.u_space.local_vertex(f.v[c]) + k) += alpha * w * quad.bary[q][c] * v1(k);
    const int tet = f.body_tet;
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    const auto g = tet_geometry(mesh, tet);
    const auto N = nedelec_values(g, tv, facet_to_tet_bary(mesh, f, tet, quad.bary[q]));
    const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
    for (int e : facet_edges(mesh, f, tet))
      sys.rhs(lay.H(sys.h_space.local_edge(te[e]))) -= w * bdot(v2, N[e].cast<Complex>());
  }
  return sys;
}

CVec3 eval_u(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet,
             const std::array<double, 4> &bary) {
  const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
  CVec3 u = CVec3::Zero();
  for (int p = 0; p < 4; ++p) {
    const int lv = sys.u_space.local_vertex(tv[p]);
    if (lv < 0)
      throw Error("eval_u: tet outside the elastic region");
    u += bary[p] * x.segment<3>(3 * lv);
  }
  return u;
}

CMat3 eval_grad_u(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet) {
  const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
  const auto g = tet_geometry(mesh, tet);
  CMat3 G = CMat3::Zero();
  for (int p = 0; p < 4; ++p) {
    const int lv = sys.u_space.local_vertex(tv[p]);
    if (lv < 0)
      throw Error("eval_grad_u: tet outside the elastic region");
    G += x.segment<3>(3 * lv) * g.grad[p].transpose().cast<Complex>();
  }
  return G;
}

CVec3 eval_H(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet,
             const std::array<double, 4> &bary) {
  const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
  const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
  const auto g = tet_geometry(mesh, tet);
  const auto N = nedelec_values(g, tv, bary);
  CVec3 H = CVec3::Zero();
  for (int e = 0; e < 6; ++e) {
    const int le = sys.h_space.local_edge(te[e]);
    if (le < 0)
      throw Error("eval_H: tet outside the Maxwell region");
    H += x(sys.layout.H(le)) * N[e].cast<Complex>();
  }
  return H;
}

CVec3 eval_curl_H(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet) {
  const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
  const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
  const auto g = tet_geometry(mesh, tet);
  const auto c = nedelec_curls(g, tv);
  CVec3 H = CVec3::Zero();
  for (int e = 0; e < 6; ++e) {
    const int le = sys.h_space.local_edge(te[e]);
    if (le < 0)
      throw Error("eval_curl_H: tet outside the Maxwell region");
    H += x(sys.layout.H(le)) * c[e].cast<Complex>();
  }
  return H;
}

} // namespace emel
