#pragma once

#include <memory>
#include <string>
#include <vector>

#include "emel/postprocess.hpp"

namespace emel {

/// One assembled and factorized scattering problem; serves any number of
/// incident fields.
class ForwardModel {
public:
  ForwardModel(const TetMesh &mesh, const StiffnessTensor &C, const MassDensityField &rho,
               const BackgroundMedium &medium, const CouplingConstants &bc, int dtn_order,
               const AssemblyOptions &opts = {});
  ~ForwardModel();
  ForwardModel(const ForwardModel &) = delete;
  ForwardModel &operator=(const ForwardModel &) = delete;

  const TetMesh &mesh() const { return mesh_; }
  const CoupledSystem &system() const { return *sys_; }
  const StiffnessTensor &stiffness() const { return C_; }
  const CouplingConstants &coupling() const { return bc_; }
  double kappa() const { return kappa_; }
  double rcond() const;

  /// Right-hand side for an incident field (interface rule of order 4).
  CVector rhs(const IncidentField &inc) const;
  CVector solve(const IncidentField &inc, double *residual = nullptr) const;
  CVector solve_rhs(const CVector &b, double *residual = nullptr) const;

  /// Scattered far field from the Cauchy data on S_R.
  FarFieldPattern far_field(const CVector &x, const std::vector<Vec3> &dirs) const;

  /// Scattered E at an exterior point by Stratton-Chu over the interface.
  /// The facets are subdivided until their size is below half the distance
  /// from z to the interface.
  CVec3 scattered_E(const CVector &x, const IncidentField &inc, const Vec3 &z) const;

  /// Normalized dipole at z: c = 1 / ||curl(q Phi(., z))||_{L2(dD)}.
  ElectricDipole dipole(const Vec3 &z, const Vec3 &q) const;

private:
  const TetMesh &mesh_;
  StiffnessTensor C_;
  CouplingConstants bc_;
  double kappa_;
  std::unique_ptr<CoupledSystem> sys_;
  std::unique_ptr<CoupledSolver> solver_;
  SurfaceQuadrature rhs_quad_;
};

/// Subdivision levels needed so that facets are smaller than dist / 2.
int near_field_refinement(const TetMesh &mesh, const Vec3 &z);

struct ReciprocityCase {
  Vec3 d, p, z, q;
  double c = 0.0;
  Complex lhs = 0.0; // (1/c) 4 pi p . E_inf(-d; dipole at z, q)
  Complex rhs = 0.0; // q . E^s(z; plane wave d, p)
  double residual = 0.0;
  std::string warning; // set when z is closer than 2h to the interface
};

ReciprocityCase mixed_reciprocity(const ForwardModel &model, const Vec3 &d, const Vec3 &p,
                                  const Vec3 &z, const Vec3 &q);

struct ProbeRow {
  int j = 0;
  Vec3 z, y;
  double f1 = 0.0;      // ||f1j||_{L2(dD)}
  double div_f2 = 0.0;  // ||Div f2j||_{L2(dD)}
  double f2 = 0.0;      // ||f2j||_{L2(dD)}
  double hi_hcurl = 0.0; // ||H^i(., z_j, q)||_{H(curl, D0)}
  bool resolved = true;
};

struct ProbeDataReport {
  ProbeSequence probes;
  Vec3 q;
  Vec3 d0_center;
  double d0_radius = 0.0; // D0 = half ball {|x - center| < radius, (x - center).nu < 0} in D
  double h_local = 0.0;
  std::vector<ProbeRow> rows;

  /// max / min of a column over resolved rows.
  double band(double ProbeRow::*column) const;
  bool hi_monotone() const;
};

/// Data of the probe system at every j: f1j = nu x H^i(z_j) + nu x curl(q Phi(., y_j)) / n_y and
/// f2j = nu x E^i(z_j) - (1/ik) nu x curl curl(q Phi(., y_j)) / n_y, with n_y the L2(dD) norm
/// of curl(q Phi(., y_j)). Div f2j uses Div(nu x f) = -nu . curl f.
ProbeDataReport probe_data(const TetMesh &mesh, double kappa, const ProbeSequence &probes,
                           const Vec3 &q);

/// Facetwise surface divergence of the piecewise-linear interpolant of a
/// tangential field given at INTERFACE vertices (indexed by global vertex).
std::vector<Complex> surface_divergence(const TetMesh &mesh, const std::vector<CVec3> &g);

struct IndicatorMap {
  std::vector<Vec3> points;
  std::vector<double> values;
  std::vector<std::string> notes; // per point; empty when clean
};

/// I(z) = |q . E^s(z; normalized dipole at z, q)|.
IndicatorMap indicator_map(const ForwardModel &model, const std::vector<Vec3> &grid,
                           const Vec3 &q);

} // namespace emel
