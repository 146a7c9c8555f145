#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "emel/dtn.hpp"
#include "emel/geometry.hpp"
#include "emel/kernels.hpp"
#include "emel/materials.hpp"

namespace emel {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<Complex, int>;

/// Piecewise-linear vector fields on the tets of one region: three DOFs per
/// vertex, DOF index 3 * local_vertex + component.
class VectorNodalSpace {
public:
  VectorNodalSpace(const TetMesh &mesh, Region region);
  Region region() const { return region_; }
  int ndofs() const { return 3 * static_cast<int>(vertices_.size()); }
  int local_vertex(int global) const { return local_[static_cast<std::size_t>(global)]; }
  const std::vector<int> &vertices() const { return vertices_; }
  const std::vector<int> &tets() const { return tets_; }

private:
  Region region_;
  std::vector<int> vertices_;
  std::vector<int> local_;
  std::vector<int> tets_;
};

/// Lowest-order Nedelec (first kind) edge elements on the tets of one region.
/// Each global edge (a, b) with a < b carries the basis
/// lambda_a grad lambda_b - lambda_b grad lambda_a.
class EdgeSpace {
public:
  EdgeSpace(const TetMesh &mesh, Region region);
  Region region() const { return region_; }
  int ndofs() const { return static_cast<int>(edges_.size()); }
  int local_edge(int global) const { return local_[static_cast<std::size_t>(global)]; }
  const std::vector<int> &edges() const { return edges_; }
  const std::vector<int> &tets() const { return tets_; }

private:
  Region region_;
  std::vector<int> edges_;
  std::vector<int> local_;
  std::vector<int> tets_;
};

/// Values of the six edge basis functions of tet `tv` (global orientation
/// applied) at barycentric point `bary`.
std::array<Vec3, 6> nedelec_values(const TetGeometry &g, const std::array<int, 4> &tv,
                                   const std::array<double, 4> &bary);
std::array<Vec3, 6> nedelec_curls(const TetGeometry &g, const std::array<int, 4> &tv);

Eigen::Matrix<double, 6, 6> edge_curlcurl_matrix(const TetGeometry &g,
                                                 const std::array<int, 4> &tv);
Eigen::Matrix<double, 6, 6> edge_mass_matrix(const TetGeometry &g, const std::array<int, 4> &tv);

/// Row/column 3a + i: vol * sum_jl C_ijkl grad_a,j grad_b,l.
Eigen::Matrix<double, 12, 12> elastic_stiffness_matrix(const TetGeometry &g,
                                                       const StiffnessTensor &C);
/// Scalar P1 mass matrix vol (1 + delta_ab) / 20.
Eigen::Matrix4d p1_mass_matrix(const TetGeometry &g);

/// Tet-local barycentric coordinates of a point given by facet barycentrics.
std::array<double, 4> facet_to_tet_bary(const TetMesh &mesh, const Facet &f, int tet,
                                        const std::array<double, 3> &fb);

struct BlockLayout {
  int n_u = 0; // elastic DOFs, placed first
  int n_H = 0; // edge DOFs, placed after the elastic block
  int size() const { return n_u + n_H; }
  int H(int local) const { return n_u + local; }
};

/// Low-rank part of the truncated Calderon term, acting on the edge DOFs
/// touching S_R: x -> L W P x on those DOFs.
struct LowRankTerm {
  std::vector<int> dofs; // global system indices
  Eigen::MatrixXcd L;    // dofs x 2K
  Eigen::MatrixXcd W;    // 2K x 2K
  Eigen::MatrixXcd P;    // 2K x dofs
  bool empty() const { return dofs.empty(); }
};

struct CoupledSystem {
  VectorNodalSpace u_space;
  EdgeSpace h_space;
  BlockLayout layout;
  SparseMatrix A; // sparse part (volume, interface, first-order sphere term)
  LowRankTerm dtn;
  CVector rhs;

  CVector apply(const CVector &x) const;
  /// Dense copy of the full operator; intended for small test meshes.
  Eigen::MatrixXcd dense() const;
};

struct AssemblyOptions {
  int threads = 1;
  bool coupling = true;            // false drops the two interface blocks
  bool check_admissibility = true; // false allows deliberate contrast runs
  int sphere_order = 2;            // facet rule on S_R
  int interface_order = 2;         // facet rule on the interface
};

CoupledSystem assemble_coupled(const TetMesh &mesh, const StiffnessTensor &C,
                               const MassDensityField &rho, const BackgroundMedium &medium,
                               const CouplingConstants &bc, const DtNOperator &dtn,
                               const AssemblyOptions &opts = {});

/// Interface traces sampled at quadrature points: f1 (any 3-vector), f2
/// (tangential).
struct InterfaceData {
  std::vector<CVec3> f1, f2;
};

/// Load vector (-ik/(b1 conj b2)) <f1, v> - (ik/b2) <f2, w>.
CVector assemble_rhs(const TetMesh &mesh, const CoupledSystem &sys, const SurfaceQuadrature &quad,
                     const InterfaceData &data, const CouplingConstants &bc, double kappa);

/// f1 = b1 nu x H^i, f2 = b2 nu x E^i (= -(b2/ik) nu x curl H^i).
InterfaceData incident_traces(const IncidentField &inc, const SurfaceQuadrature &quad,
                              const CouplingConstants &bc, double kappa);

using VectorFunction = std::function<CVec3(const Vec3 &)>;
using TraceFunction = std::function<CVec3(const Vec3 &x, const Vec3 &nu)>;

/// Coercive auxiliary problem on the BODY region:
///   curl curl H + H = xi1, div(C grad u) - u = xi2 in the body,
///   T u - b1 nu x H = h1, nu x curl H + (ik/b2) nu x u = h2 on its boundary.
CoupledSystem assemble_auxiliary(const TetMesh &mesh, const StiffnessTensor &C,
                                 const CouplingConstants &bc, double kappa,
                                 const VectorFunction &xi1, const VectorFunction &xi2,
                                 const TraceFunction &h1, const TraceFunction &h2,
                                 const AssemblyOptions &opts = {});

/// Field evaluation helpers on a coefficient vector laid out as in `sys`.
CVec3 eval_u(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet,
             const std::array<double, 4> &bary);
CVec3 eval_H(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet,
             const std::array<double, 4> &bary);
CVec3 eval_curl_H(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet);
/// Gradient matrix G(k, l) = d u_k / d x_l, constant per tet.
CMat3 eval_grad_u(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x, int tet);

} // namespace emel
