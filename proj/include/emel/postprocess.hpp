#pragma once

#include <optional>
#include <vector>

#include "emel/solve.hpp"

namespace emel {

struct FieldSample {
  Vec3 x;
  Region region = Region::Shell;
  CVec3 u = CVec3::Zero(); // set in the body
  bool has_em = false;     // false in the body: no electromagnetic field inside D
  CVec3 H = CVec3::Zero(); // scattered field in the shell
  CVec3 E = CVec3::Zero(); // -(1/ik) curl H, constant per tet
};

std::vector<FieldSample> evaluate_fields(const TetMesh &mesh, const CoupledSystem &sys,
                                         const CVector &x, const std::vector<Vec3> &points,
                                         double kappa);

/// Tangential Cauchy data m = nu x E^s, j = nu x H^s on a closed surface.
struct CauchyData {
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<Vec3> normals;
  std::vector<CVec3> nxE, nxH;
};

/// Data on S_R from a solution: nu x H^s is the edge-element trace and
/// nu x E^s = -G_e(xhat x H^s) is taken from the same truncated Calderon map
/// the system was assembled with.
CauchyData sphere_cauchy_data(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                              int order = 2);

/// Data on the interface: nu x H^s from the edge-element trace, nu x E^s from
/// the displacement through the transmission condition nu x E = nu x u / b2
/// minus the incident part. `refine` splits each facet 4^refine times.
CauchyData interface_cauchy_data(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                                 const IncidentField &inc, const CouplingConstants &bc,
                                 double kappa, int order = 2, int refine = 0);

CauchyData interface_cauchy_data(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                                 const IncidentField &inc, const CouplingConstants &bc,
                                 double kappa, const SurfaceQuadrature &quad);

/// Exact fields sampled onto a quadrature (oracle input).
CauchyData cauchy_data_from_fields(const std::vector<Vec3> &points,
                                   const std::vector<double> &weights,
                                   const std::vector<Vec3> &normals,
                                   const std::vector<FieldPair> &fields);

struct FarFieldPattern {
  std::vector<Vec3> directions;
  std::vector<CVec3> E, H;
};

/// E_inf(xhat) = (ik/4pi) xhat x sum w [nu x E^s + (nu x H^s) x xhat] e^{-ik xhat.y}.
/// H_inf comes from the same formula applied to the dual pair (H, -E), so
/// H_inf = xhat x E_inf is a check rather than a definition.
FarFieldPattern far_field(const CauchyData &data, double kappa, const std::vector<Vec3> &dirs);

/// E^s(z) from the Stratton-Chu representation over the data surface:
/// sum w [grad Phi x m - (1/ik)(Hess Phi j + k^2 Phi j)].
CVec3 near_field_E(const CauchyData &data, double kappa, const Vec3 &z);

enum class EnergyReconstruction {
  Traction,     // nu x E from u / b2 and nu x H from T u / b1
  Transmission, // nu x E from u / b2, H from the edge-element trace plus H^i;
                // its real flux vanishes for the discrete solution when
                // `order` matches the rule the load was assembled with
  Maxwell       // H trace plus H^i and E = -(1/ik) curl H plus E^i
};

struct EnergyReport {
  double flux_real = 0.0;  // Re int (nu x conj E) . H
  double flux_imag = 0.0;
  double magnitude = 0.0;  // int |E| |H|
  double ratio = 0.0;      // |flux_real| / magnitude
};

EnergyReport energy_balance(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                            const StiffnessTensor &C, const IncidentField &inc,
                            const CouplingConstants &bc, double kappa,
                            EnergyReconstruction how = EnergyReconstruction::Traction,
                            int order = 2);

/// ||u||_{H1(D)} and ||H||_{H(curl)} of a coefficient vector.
struct SolutionNorms {
  double u_H1 = 0.0;
  double H_Hcurl = 0.0;
};
SolutionNorms solution_norms(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x);

/// Exact reference fields for error measurement.
struct ExactFields {
  std::function<CVec3(const Vec3 &)> u;
  std::function<CMat3(const Vec3 &)> grad_u; // (k, l) = d u_k / d x_l
  std::function<CVec3(const Vec3 &)> H;
  std::function<CVec3(const Vec3 &)> curl_H;
};

struct ErrorNorms {
  double u_L2 = 0.0, u_H1 = 0.0;
  double H_L2 = 0.0, H_Hcurl = 0.0;
  double total() const { return u_H1 + H_Hcurl; }
};

ErrorNorms solution_errors(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                           const ExactFields &exact);

/// Transmission data for given exact fields: f1 = T u - b1 nu x H,
/// f2 = nu x u + (b2/ik) nu x curl H.
InterfaceData manufactured_traces(const ExactFields &exact, const StiffnessTensor &C,
                                  const SurfaceQuadrature &quad, const CouplingConstants &bc,
                                  double kappa);

/// Traction (T u)_i = nu_j C_ijkl du_k/dx_l.
CVec3 traction(const StiffnessTensor &C, const CMat3 &grad_u, const Vec3 &nu);

} // namespace emel
