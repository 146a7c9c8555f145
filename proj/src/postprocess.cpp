#include "emel/postprocess.hpp"

#include <cmath>

namespace emel {

std::vector<FieldSample> evaluate_fields(const TetMesh &mesh, const CoupledSystem &sys,
                                         const CVector &x, const std::vector<Vec3> &points,
                                         double kappa) {
  std::vector<FieldSample> out;
  out.reserve(points.size());
  for (const auto &p : points) {
    const auto loc = mesh.locate(p);
    if (!loc)
      throw Error("evaluate_fields: point outside the mesh");
    FieldSample s;
    s.x = p;
    s.region = mesh.regions()[static_cast<std::size_t>(loc->tet)];
    if (s.region == Region::Body) {
      s.u = eval_u(mesh, sys, x, loc->tet, loc->bary);
    } else {
      s.has_em = true;
      s.H = eval_H(mesh, sys, x, loc->tet, loc->bary);
      s.E = -eval_curl_H(mesh, sys, x, loc->tet) / (kI * kappa);
    }
    out.push_back(s);
  }
  return out;
}

CauchyData sphere_cauchy_data(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                              int order) {
  const double R = mesh.radius();
  const auto quad = surface_quadrature(mesh, FacetTag::Sphere, order);
  CauchyData d;
  std::vector<CVec3> lam;
  std::vector<Vec3> flat;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto &f = mesh.facets()[static_cast<std::size_t>(quad.facet[q])];
    const Vec3 xq = quad.points[q];
    const Vec3 xh = xq.normalized();
    const auto tb = facet_to_tet_bary(mesh, f, f.shell_tet, quad.bary[q]);
    const CVec3 H = eval_H(mesh, sys, x, f.shell_tet, tb);
    d.points.push_back(R * xh);
    d.weights.push_back(quad.weights[q] * R * R * xh.dot(f.normal) / xq.squaredNorm());
    d.normals.push_back(xh);
    d.nxH.push_back(cross(xh, H));
    lam.push_back(cross(xh, H));
  }
  d.nxE.resize(d.points.size());
  const auto &W = sys.dtn.W;
  const int K = static_cast<int>(W.rows()) / 2;
  const int N = K > 0 ? static_cast<int>(std::lround(std::sqrt(K + 1.0) - 1.0)) : 0;
  CVector c = CVector::Zero(2 * K);
  std::vector<CVec3> U, V;
  if (K > 0) {
    for (std::size_t q = 0; q < d.points.size(); ++q) {
      vector_spherical_harmonics_all(N, d.normals[q], U, V);
      for (int k = 0; k < K; ++k) {
        c(k) += d.weights[q] * bdot(lam[q], U[static_cast<std::size_t>(k)].conjugate()) / R;
        c(K + k) += d.weights[q] * bdot(lam[q], V[static_cast<std::size_t>(k)].conjugate()) / R;
      }
    }
  }
  const CVector corr = K > 0 ? CVector(W * c) : CVector();
  for (std::size_t q = 0; q < d.points.size(); ++q) {
    // -G_e lambda = -xhat x lambda - sum (G_e - xhat x) lambda
    CVec3 e = -cross(d.normals[q], lam[q]);
    if (K > 0) {
      vector_spherical_harmonics_all(N, d.normals[q], U, V);
      for (int k = 0; k < K; ++k)
        e -= (corr(k) * U[static_cast<std::size_t>(k)] +
              corr(K + k) * V[static_cast<std::size_t>(k)]) /
             R;
    }
    d.nxE[q] = e;
  }
  return d;
}

CauchyData interface_cauchy_data(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                                 const IncidentField &inc, const CouplingConstants &bc,
                                 double kappa, int order, int refine) {
  return interface_cauchy_data(mesh, sys, x, inc, bc, kappa,
                               refined_surface_quadrature(mesh, FacetTag::Interface, order, refine));
}

CauchyData interface_cauchy_data(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                                 const IncidentField &inc, const CouplingConstants &bc,
                                 double kappa, const SurfaceQuadrature &quad) {
  CauchyData d;
  d.points = quad.points;
  d.weights = quad.weights;
  d.normals = quad.normals;
  d.nxE.resize(quad.size());
  d.nxH.resize(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto &f = mesh.facets()[static_cast<std::size_t>(quad.facet[q])];
    const auto tb = facet_to_tet_bary(mesh, f, f.shell_tet, quad.bary[q]);
    const CVec3 H = eval_H(mesh, sys, x, f.shell_tet, tb);
    CVec3 u = CVec3::Zero();
    for (int c = 0; c < 3; ++c)
      u += quad.bary[q][c] * x.segment<3>(3 * sys.u_space.local_vertex(f.v[c]));
    const Vec3 &nu = quad.normals[q];
    const auto fi = incident_field(quad.points[q], inc, kappa);
    d.nxH[q] = cross(nu, H);
    d.nxE[q] = cross(nu, u) / bc.b2 - cross(nu, fi.E);
  }
  return d;
}

CauchyData cauchy_data_from_fields(const std::vector<Vec3> &points,
                                   const std::vector<double> &weights,
                                   const std::vector<Vec3> &normals,
                                   const std::vector<FieldPair> &fields) {
  CauchyData d;
  d.points = points;
  d.weights = weights;
  d.normals = normals;
  for (std::size_t q = 0; q < points.size(); ++q) {
    d.nxE.push_back(cross(normals[q], fields[q].E));
    d.nxH.push_back(cross(normals[q], fields[q].H));
  }
  return d;
}

FarFieldPattern far_field(const CauchyData &data, double kappa, const std::vector<Vec3> &dirs) {
  FarFieldPattern p;
  p.directions = dirs;
  const Complex ik = kI * kappa;
  for (const auto &d : dirs) {
    const Vec3 xh = d.normalized();
    CVec3 se = CVec3::Zero(), sh = CVec3::Zero();
    for (std::size_t q = 0; q < data.points.size(); ++q) {
      const Complex e = std::exp(-ik * xh.dot(data.points[q]));
      se += data.weights[q] * e * (data.nxE[q] + cross(data.nxH[q], xh));
      // dual pair (E, H) -> (H, -E)
      sh += data.weights[q] * e * (data.nxH[q] - cross(data.nxE[q], xh));
    }
    p.E.push_back(ik / (4.0 * kPi) * cross(xh, se));
    p.H.push_back(ik / (4.0 * kPi) * cross(xh, sh));
  }
  return p;
}

CVec3 near_field_E(const CauchyData &data, double kappa, const Vec3 &z) {
  CVec3 E = CVec3::Zero();
  const Complex ik = kI * kappa;
  for (std::size_t q = 0; q < data.points.size(); ++q) {
    // kernels are symmetric in (x, y); derivatives taken in the evaluation point z
    const auto k = fundamental_solution(z, data.points[q], kappa);
    const CVec3 &m = data.nxE[q];
    const CVec3 &j = data.nxH[q];
    E += data.weights[q] * (cross(k.grad, m) - (k.hess * j + kappa * kappa * k.phi * j) / ik);
  }
  return E;
}

CVec3 traction(const StiffnessTensor &C, const CMat3 &grad_u, const Vec3 &nu) {
  CVec3 t = CVec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          t(i) += nu(j) * C(i, j, k, l) * grad_u(k, l);
  return t;
}

EnergyReport energy_balance(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                            const StiffnessTensor &C, const IncidentField &inc,
                            const CouplingConstants &bc, double kappa, EnergyReconstruction how,
                            int order) {
  const auto quad = surface_quadrature(mesh, FacetTag::Interface, order);
  Complex flux = 0.0;
  double mag = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto &f = mesh.facets()[static_cast<std::size_t>(quad.facet[q])];
    const Vec3 &nu = quad.normals[q];
    const auto fi = incident_field(quad.points[q], inc, kappa);
    const auto tb = facet_to_tet_bary(mesh, f, f.shell_tet, quad.bary[q]);
    CVec3 u = CVec3::Zero();
    for (int c = 0; c < 3; ++c)
      u += quad.bary[q][c] * x.segment<3>(3 * sys.u_space.local_vertex(f.v[c]));
    CVec3 nxE, nxH;
    switch (how) {
    case EnergyReconstruction::Transmission:
      nxE = cross(nu, u) / bc.b2;
      nxH = cross(nu, CVec3(eval_H(mesh, sys, x, f.shell_tet, tb) + fi.H));
      break;
    case EnergyReconstruction::Traction:
      nxE = cross(nu, u) / bc.b2;
      nxH = traction(C, eval_grad_u(mesh, sys, x, f.body_tet), nu) / bc.b1;
      break;
    case EnergyReconstruction::Maxwell: {
      const CVec3 E = -eval_curl_H(mesh, sys, x, f.shell_tet) / (kI * kappa) + fi.E;
      nxE = cross(nu, E);
      nxH = cross(nu, CVec3(eval_H(mesh, sys, x, f.shell_tet, tb) + fi.H));
      break;
    }
    }
    // tangential H recovered from nu x H: H_t = (nu x H) x nu
    const CVec3 Ht = cross(nxH, nu);
    flux += quad.weights[q] * bdot(nxE.conjugate(), Ht);
    mag += quad.weights[q] * nxE.norm() * nxH.norm();
  }
  EnergyReport r;
  r.flux_real = flux.real();
  r.flux_imag = flux.imag();
  r.magnitude = mag;
  r.ratio = mag > 0.0 ? std::abs(flux.real()) / mag : 0.0;
  return r;
}

SolutionNorms solution_norms(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x) {
  double u2 = 0.0, h2 = 0.0;
  for (int tet : sys.u_space.tets()) {
    const auto g = tet_geometry(mesh, tet);
    const auto M = p1_mass_matrix(g);
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const auto ua = x.segment<3>(3 * sys.u_space.local_vertex(tv[a]));
        const auto ub = x.segment<3>(3 * sys.u_space.local_vertex(tv[b]));
        u2 += M(a, b) * ua.dot(ub).real();
      }
    u2 += g.volume * eval_grad_u(mesh, sys, x, tet).squaredNorm();
  }
  for (int tet : sys.h_space.tets()) {
    const auto g = tet_geometry(mesh, tet);
    const auto &tv = mesh.tets()[static_cast<std::size_t>(tet)];
    const auto &te = mesh.tet_edges()[static_cast<std::size_t>(tet)];
    const auto M = edge_mass_matrix(g, tv);
    Eigen::Matrix<Complex, 6, 1> c;
    for (int e = 0; e < 6; ++e)
      c(e) = x(sys.layout.H(sys.h_space.local_edge(te[e])));
    h2 += c.dot(M.cast<Complex>() * c).real();
    h2 += g.volume * eval_curl_H(mesh, sys, x, tet).squaredNorm();
  }
  return {std::sqrt(u2), std::sqrt(h2)};
}

ErrorNorms solution_errors(const TetMesh &mesh, const CoupledSystem &sys, const CVector &x,
                           const ExactFields &exact) {
  const auto rule = collapsed_tet_rule(4);
  double uL2 = 0.0, uG = 0.0, hL2 = 0.0, hC = 0.0;
  for (int tet : sys.u_space.tets()) {
    const auto g = tet_geometry(mesh, tet);
    const CMat3 Gh = eval_grad_u(mesh, sys, x, tet);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto &b = rule.bary[q];
      const Vec3 p = b[0] * g.x[0] + b[1] * g.x[1] + b[2] * g.x[2] + b[3] * g.x[3];
      const double w = g.volume * rule.weights[q];
      uL2 += w * (eval_u(mesh, sys, x, tet, b) - exact.u(p)).squaredNorm();
      uG += w * (Gh - exact.grad_u(p)).squaredNorm();
    }
  }
  for (int tet : sys.h_space.tets()) {
    const auto g = tet_geometry(mesh, tet);
    const CVec3 ch = eval_curl_H(mesh, sys, x, tet);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto &b = rule.bary[q];
      const Vec3 p = b[0] * g.x[0] + b[1] * g.x[1] + b[2] * g.x[2] + b[3] * g.x[3];
      const double w = g.volume * rule.weights[q];
      hL2 += w * (eval_H(mesh, sys, x, tet, b) - exact.H(p)).squaredNorm();
      hC += w * (ch - exact.curl_H(p)).squaredNorm();
    }
  }
  ErrorNorms e;
  e.u_L2 = std::sqrt(uL2);
  e.u_H1 = std::sqrt(uL2 + uG);
  e.H_L2 = std::sqrt(hL2);
  e.H_Hcurl = std::sqrt(hL2 + hC);
  return e;
}

InterfaceData manufactured_traces(const ExactFields &exact, const StiffnessTensor &C,
                                  const SurfaceQuadrature &quad, const CouplingConstants &bc,
                                  double kappa) {
  InterfaceData d;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec3 &x = quad.points[q];
    const Vec3 &nu = quad.normals[q];
    d.f1.push_back(traction(C, exact.grad_u(x), nu) - bc.b1 * cross(nu, exact.H(x)));
    d.f2.push_back(cross(nu, exact.u(x)) + bc.b2 / (kI * kappa) * cross(nu, exact.curl_H(x)));
  }
  return d;
}

} // namespace emel
