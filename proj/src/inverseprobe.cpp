#include "emel/inverseprobe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace emel {

ForwardModel::ForwardModel(const TetMesh &mesh, const StiffnessTensor &C,
                           const MassDensityField &rho, const BackgroundMedium &medium,
                           const CouplingConstants &bc, int dtn_order, const AssemblyOptions &opts)
    : mesh_(mesh), C_(C), bc_(bc), kappa_(medium.kappa()) {
  const auto dtn = build_calderon(kappa_, mesh.radius(), dtn_order);
  sys_ = std::make_unique<CoupledSystem>(assemble_coupled(mesh, C, rho, medium, bc, dtn, opts));
  solver_ = std::make_unique<CoupledSolver>(*sys_);
  rhs_quad_ = surface_quadrature(mesh, FacetTag::Interface, 4);
}

ForwardModel::~ForwardModel() = default;

double ForwardModel::rcond() const { return solver_->rcond(); }

CVector ForwardModel::rhs(const IncidentField &inc) const {
  return assemble_rhs(mesh_, *sys_, rhs_quad_, incident_traces(inc, rhs_quad_, bc_, kappa_), bc_,
                      kappa_);
}

CVector ForwardModel::solve(const IncidentField &inc, double *residual) const {
  return solver_->solve(rhs(inc), residual);
}

CVector ForwardModel::solve_rhs(const CVector &b, double *residual) const {
  return solver_->solve(b, residual);
}

FarFieldPattern ForwardModel::far_field(const CVector &x, const std::vector<Vec3> &dirs) const {
  return emel::far_field(sphere_cauchy_data(mesh_, *sys_, x), kappa_, dirs);
}

CVec3 ForwardModel::scattered_E(const CVector &x, const IncidentField &inc, const Vec3 &z) const {
  const auto quad = focused_surface_quadrature(mesh_, FacetTag::Interface, 2, z, 6);
  return near_field_E(interface_cauchy_data(mesh_, *sys_, x, inc, bc_, kappa_, quad), kappa_, z);
}

ElectricDipole ForwardModel::dipole(const Vec3 &z, const Vec3 &q) const {
  const auto quad = focused_surface_quadrature(mesh_, FacetTag::Interface, 2, z, 6);
  ElectricDipole dip;
  dip.z = z;
  dip.q = q;
  dip.c = dipole_normalization(z, q, quad, kappa_);
  dip.quad_order = 2;
  dip.quad_refine = -1; // focused subdivision
  return dip;
}

int near_field_refinement(const TetMesh &mesh, const Vec3 &z) {
  const double d = mesh.distance_to(FacetTag::Interface, z);
  const double h = mesh.local_h(FacetTag::Interface, z);
  int levels = 0;
  while (levels < 6 && h / std::ldexp(1.0, levels) > 0.5 * d)
    ++levels;
  return levels;
}

ReciprocityCase mixed_reciprocity(const ForwardModel &model, const Vec3 &d, const Vec3 &p,
                                  const Vec3 &z, const Vec3 &q) {
  const auto &mesh = model.mesh();
  const auto region = mesh.region_of(z);
  if (!region || *region != Region::Shell)
    throw Error("reciprocity point must lie in the SHELL region");
  ReciprocityCase rc;
  rc.d = d;
  rc.p = p;
  rc.z = z;
  rc.q = q;
  const double dist = mesh.distance_to(FacetTag::Interface, z);
  const double h = mesh.local_h(FacetTag::Interface, z);
  if (dist < 2.0 * h)
    rc.warning = "z is " + std::to_string(dist) + " from the interface (< 2h = " +
                 std::to_string(2.0 * h) + "); near-field evaluation may be inaccurate";
  if (q.norm() == 0.0 || p.norm() == 0.0)
    return rc; // both sides vanish

  const auto dip = model.dipole(z, q);
  rc.c = dip.c;
  const CVector xd = model.solve(dip);
  const auto ff = model.far_field(xd, {-d});
  rc.lhs = 4.0 * kPi / dip.c * bdot(p.cast<Complex>(), ff.E[0]);

  const PlaneWave pw{d, p};
  const CVector xp = model.solve(pw);
  rc.rhs = bdot(q.cast<Complex>(), model.scattered_E(xp, pw, z));

  const double scale = std::max(std::abs(rc.lhs), std::abs(rc.rhs));
  rc.residual = scale > 0.0 ? std::abs(rc.lhs - rc.rhs) / scale : 0.0;
  return rc;
}

namespace {

// Red refinement of a tet into eight children.
std::array<std::array<Vec3, 4>, 8> split_tet(const std::array<Vec3, 4> &x) {
  const auto m = [&](int a, int b) { return Vec3(0.5 * (x[a] + x[b])); };
  const Vec3 m01 = m(0, 1), m02 = m(0, 2), m03 = m(0, 3), m12 = m(1, 2), m13 = m(1, 3),
             m23 = m(2, 3);
  return {{{x[0], m01, m02, m03},
           {m01, x[1], m12, m13},
           {m02, m12, x[2], m23},
           {m03, m13, m23, x[3]},
           {m01, m02, m03, m13},
           {m01, m02, m12, m13},
           {m02, m03, m13, m23},
           {m02, m12, m13, m23}}};
}

struct HalfBall {
  Vec3 center, normal;
  double radius;
  bool contains(const Vec3 &p) const {
    const Vec3 d = p - center;
    return d.norm() < radius && d.dot(normal) < 0.0;
  }
};

double tet_diameter(const std::array<Vec3, 4> &x) {
  double d = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      d = std::max(d, (x[a] - x[b]).norm());
  return d;
}

void integrate_hcurl(const std::array<Vec3, 4> &x, const HalfBall &D0, const ElectricDipole &dip,
                     double kappa, const TetRule &rule, int depth, double &sum) {
  const Vec3 c = 0.25 * (x[0] + x[1] + x[2] + x[3]);
  const double diam = tet_diameter(x);
  const double dist_src = std::max((dip.z - c).norm() - diam, 0.0);
  const double dist_ball = std::abs((c - D0.center).norm() - D0.radius);
  if (depth < 5 && (diam > 0.5 * dist_src || (depth < 3 && dist_ball < diam))) {
    for (const auto &child : split_tet(x))
      integrate_hcurl(child, D0, dip, kappa, rule, depth + 1, sum);
    return;
  }
  const double vol = std::abs((x[1] - x[0]).cross(x[2] - x[0]).dot(x[3] - x[0])) / 6.0;
  const CVec3 q = dip.q.cast<Complex>();
  for (std::size_t i = 0; i < rule.weights.size(); ++i) {
    const auto &b = rule.bary[i];
    const Vec3 p = b[0] * x[0] + b[1] * x[1] + b[2] * x[2] + b[3] * x[3];
    if (!D0.contains(p))
      continue;
    const auto k = fundamental_solution(p, dip.z, kappa);
    const CVec3 H = dip.c * cross(k.grad, q);
    const CVec3 curlH = dip.c * (k.hess * q + kappa * kappa * k.phi * q);
    sum += vol * rule.weights[i] * (H.squaredNorm() + curlH.squaredNorm());
  }
}

double hcurl_norm_on_half_ball(const TetMesh &mesh, const HalfBall &D0, const ElectricDipole &dip,
                               double kappa) {
  const auto rule = collapsed_tet_rule(3);
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.tets().size(); ++t) {
    if (mesh.regions()[t] != Region::Body)
      continue;
    const auto g = tet_geometry(mesh, static_cast<int>(t));
    bool near = false;
    const double diam = tet_diameter(g.x);
    for (const auto &v : g.x)
      near = near || (v - D0.center).norm() < D0.radius + diam;
    if (near)
      integrate_hcurl(g.x, D0, dip, kappa, rule, 0, sum);
  }
  return std::sqrt(sum);
}

double l2_curl_dipole(const SurfaceQuadrature &quad, const Vec3 &z, const Vec3 &q, double kappa) {
  return 1.0 / dipole_normalization(z, q, quad, kappa);
}

} // namespace

ProbeDataReport probe_data(const TetMesh &mesh, double kappa, const ProbeSequence &probes,
                           const Vec3 &q) {
  ProbeDataReport rep;
  rep.probes = probes;
  rep.q = q;
  rep.d0_center = probes.anchor;
  rep.d0_radius = probes.delta;
  rep.h_local = mesh.local_h(FacetTag::Interface, probes.anchor);
  const HalfBall D0{probes.anchor, probes.normal, probes.delta};
  const Complex ik = kI * kappa;
  const CVec3 qc = q.cast<Complex>();
  for (std::size_t jj = 0; jj < probes.exterior.size(); ++jj) {
    ProbeRow row;
    row.j = static_cast<int>(jj) + 1;
    row.z = probes.exterior[jj];
    row.y = probes.interior[jj];
    row.resolved = probes.delta / row.j >= 2.0 * rep.h_local;
    const auto quad = focused_surface_quadrature(mesh, FacetTag::Interface, 2, row.z, 7);
    const double cz = 1.0 / l2_curl_dipole(quad, row.z, q, kappa);
    const double cy = 1.0 / l2_curl_dipole(quad, row.y, q, kappa);
    double f1 = 0.0, f2 = 0.0, div = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const Vec3 &x = quad.points[i];
      const Vec3 &nu = quad.normals[i];
      const auto kz = fundamental_solution(x, row.z, kappa);
      const auto ky = fundamental_solution(x, row.y, kappa);
      const CVec3 curl_z = cross(kz.grad, qc), curl_y = cross(ky.grad, qc);
      const CVec3 cc_z = kz.hess * qc + kappa * kappa * kz.phi * qc;
      const CVec3 cc_y = ky.hess * qc + kappa * kappa * ky.phi * qc;
      const CVec3 g1 = cross(nu, CVec3(cz * curl_z + cy * curl_y));
      const CVec3 F = -(cz * cc_z + cy * cc_y) / ik;
      const CVec3 curlF = ik * (cz * curl_z + cy * curl_y);
      const Complex divf2 = -bdot(nu.cast<Complex>(), curlF);
      f1 += quad.weights[i] * g1.squaredNorm();
      f2 += quad.weights[i] * cross(nu, F).squaredNorm();
      div += quad.weights[i] * std::norm(divf2);
    }
    row.f1 = std::sqrt(f1);
    row.f2 = std::sqrt(f2);
    row.div_f2 = std::sqrt(div);
    ElectricDipole dip{row.z, q, cz, 2, -1};
    row.hi_hcurl = hcurl_norm_on_half_ball(mesh, D0, dip, kappa);
    rep.rows.push_back(row);
  }
  return rep;
}

double ProbeDataReport::band(double ProbeRow::*column) const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto &r : rows)
    if (r.resolved) {
      lo = std::min(lo, r.*column);
      hi = std::max(hi, r.*column);
    }
  return hi > 0.0 ? hi / lo : 0.0;
}

bool ProbeDataReport::hi_monotone() const {
  double prev = -1.0;
  for (const auto &r : rows) {
    if (!r.resolved)
      continue;
    if (!(r.hi_hcurl > prev))
      return false;
    prev = r.hi_hcurl;
  }
  return true;
}

std::vector<Complex> surface_divergence(const TetMesh &mesh, const std::vector<CVec3> &g) {
  const auto &V = mesh.vertices();
  if (g.size() != V.size())
    throw Error("surface_divergence: one value per mesh vertex required");
  std::vector<Complex> out(mesh.facets().size(), 0.0);
  for (std::size_t k = 0; k < mesh.facets().size(); ++k) {
    const auto &f = mesh.facets()[k];
    if (f.tag != FacetTag::Interface)
      continue;
    const Vec3 &a = V[f.v[0]], &b = V[f.v[1]], &c = V[f.v[2]];
    const Vec3 n2 = (b - a).cross(c - a); // 2 * area * unit normal
    const Vec3 n = n2.normalized();
    const std::array<Vec3, 3> X{a, b, c};
    Complex div = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec3 grad = n.cross(X[(i + 2) % 3] - X[(i + 1) % 3]) / n2.norm();
      div += bdot(g[f.v[i]], grad.cast<Complex>());
    }
    out[k] = div;
  }
  return out;
}

IndicatorMap indicator_map(const ForwardModel &model, const std::vector<Vec3> &grid,
                           const Vec3 &q) {
  IndicatorMap map;
  const auto &mesh = model.mesh();
  for (const auto &z : grid) {
    map.points.push_back(z);
    std::string note;
    double value = 0.0;
    try {
      const auto region = mesh.region_of(z);
      if (!region || *region != Region::Shell)
        throw Error("point is not in the SHELL region");
      const double dist = mesh.distance_to(FacetTag::Interface, z);
      const double h = mesh.local_h(FacetTag::Interface, z);
      if (dist < 2.0 * h)
        note = "clearance " + std::to_string(dist) + " < 2h";
      if (q.norm() > 0.0) {
        const auto dip = model.dipole(z, q);
        const CVector x = model.solve(dip);
        value = std::abs(bdot(q.cast<Complex>(), model.scattered_E(x, dip, z)));
      }
    } catch (const Error &e) {
      note = std::string("skipped: ") + e.what();
      value = std::numeric_limits<double>::quiet_NaN();
    }
    map.values.push_back(value);
    map.notes.push_back(note);
  }
  return map;
}

} // namespace emel
