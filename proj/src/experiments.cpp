#include "emel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace emel {

namespace {

AssemblyOptions options(int threads, bool check) {
  AssemblyOptions o;
  o.threads = threads;
  o.check_admissibility = check;
  return o;
}

} // namespace

ScenarioModel::ScenarioModel(const Scenario &s, const std::filesystem::path &mesh_path, int threads,
                             const CouplingConstants &bc, bool check_admissibility)
    : path_(mesh_path), mesh_(load_mesh(mesh_path.string(), s.radius)),
      model_(mesh_, s.stiffness, MassDensityField::uniform(mesh_.count(Region::Body), s.density),
             s.medium(), bc, s.dtn_order, options(threads, check_admissibility)) {}

ExactFields manufactured_fields(const Scenario &s) {
  if (!s.isotropic)
    throw ConfigError("manufactured fields need an isotropic material");
  const double kp = s.omega * std::sqrt(s.density / (s.lame_lambda + 2.0 * s.lame_mu));
  const double kappa = s.kappa();
  const Vec3 d = s.manufactured.direction.normalized();
  const ElectricDipole dip{s.manufactured.source, s.manufactured.moment, 1.0};
  ExactFields ex;
  ex.u = [d, kp](const Vec3 &x) {
    return CVec3(std::exp(kI * kp * d.dot(x)) * d.cast<Complex>());
  };
  ex.grad_u = [d, kp](const Vec3 &x) {
    return CMat3(kI * kp * std::exp(kI * kp * d.dot(x)) * (d * d.transpose()).cast<Complex>());
  };
  ex.H = [dip, kappa](const Vec3 &x) { return dipole_pair(x, dip, kappa).H; };
  ex.curl_H = [dip, kappa](const Vec3 &x) {
    return CVec3(-kI * kappa * dipole_pair(x, dip, kappa).E);
  };
  return ex;
}

LevelResult manufactured_level(const Scenario &s, const ScenarioModel &m) {
  const auto ex = manufactured_fields(s);
  const auto &sys = m.model().system();
  const auto quad = surface_quadrature(m.mesh(), FacetTag::Interface, 4);
  const auto data = manufactured_traces(ex, s.stiffness, quad, s.coupling, s.kappa());
  LevelResult r;
  r.mesh = m.mesh_path().filename().string();
  r.h = m.mesh().h_max();
  r.dofs = sys.layout.size();
  const CVector x =
      m.model().solve_rhs(assemble_rhs(m.mesh(), sys, quad, data, s.coupling, s.kappa()),
                          &r.residual);
  r.errors = solution_errors(m.mesh(), sys, x, ex);
  return r;
}

ConvergenceTable make_table(std::vector<LevelResult> levels) {
  ConvergenceTable t;
  t.levels = std::move(levels);
  for (std::size_t i = 1; i < t.levels.size(); ++i) {
    const auto &a = t.levels[i - 1], &b = t.levels[i];
    t.slopes.push_back(std::log(a.errors.total() / b.errors.total()) / std::log(a.h / b.h));
  }
  return t;
}

ConvergenceTable manufactured_convergence(const Scenario &s) {
  if (s.levels.size() < 2)
    throw ConfigError("[mesh] levels: at least two refinement levels required");
  std::vector<LevelResult> rows;
  for (const auto &p : s.levels) {
    const ScenarioModel m(s, p);
    rows.push_back(manufactured_level(s, m));
  }
  return make_table(std::move(rows));
}

bool ConvergenceTable::monotone() const {
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i].errors.total() < levels[i - 1].errors.total()))
      return false;
  return true;
}

double ConvergenceTable::min_slope() const {
  return slopes.empty() ? 0.0 : *std::min_element(slopes.begin(), slopes.end());
}

CVector scatter(const Scenario &s, const ScenarioModel &m, double *residual) {
  return m.model().solve(s.incident, residual);
}

EnergyReport energy_report(const Scenario &s, const ScenarioModel &m) {
  const CVector x = scatter(s, m);
  return energy_balance(m.mesh(), m.model().system(), x, s.stiffness, s.incident,
                        m.model().coupling(), s.kappa());
}

double stability_ratio(const ScenarioModel &m) {
  const auto &mesh = m.mesh();
  const auto &fm = m.model();
  const auto quad = surface_quadrature(mesh, FacetTag::Interface, 4);
  InterfaceData d;
  double n1 = 0.0, n2 = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec3 &x = quad.points[q];
    const CVec3 g1(std::cos(x(0) + x(1)), Complex(0.0, std::sin(2.0 * x(2))),
                   std::cos(x(1) - x(2)));
    const CVec3 g2(std::sin(x(1)), std::cos(x(0)), Complex(0.5, std::sin(x(0) + x(2))));
    d.f1.push_back(g1);
    d.f2.push_back(cross(quad.normals[q], g2));
    n1 += quad.weights[q] * d.f1.back().squaredNorm();
    n2 += quad.weights[q] * d.f2.back().squaredNorm();
  }
  const CVector b = assemble_rhs(mesh, fm.system(), quad, d, fm.coupling(), fm.kappa());
  const CVector x = fm.solve_rhs(b);
  const auto n = solution_norms(mesh, fm.system(), x);
  return (n.u_H1 + n.H_Hcurl) / (std::sqrt(n1) + std::sqrt(n2));
}

std::vector<Vec3> direction_grid(int n) { return sphere_rule(n).xhat; }

FarFieldCheck far_field_oracle(const TetMesh &mesh, double kappa, const ElectricDipole &dip,
                               int order) {
  const auto quad = surface_quadrature(mesh, FacetTag::Sphere, order);
  std::vector<Vec3> pts, nrm;
  std::vector<double> w;
  std::vector<FieldPair> f;
  const double R = mesh.radius();
  // project the flat rule onto S_R, as for computed data
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Vec3 xh = quad.points[q].normalized();
    const auto &fc = mesh.facets()[static_cast<std::size_t>(quad.facet[q])];
    pts.push_back(R * xh);
    nrm.push_back(xh);
    w.push_back(quad.weights[q] * R * R * xh.dot(fc.normal) / quad.points[q].squaredNorm());
    f.push_back(dipole_pair(pts.back(), dip, kappa));
  }
  const auto dirs = direction_grid(8);
  const auto ff = far_field(cauchy_data_from_fields(pts, w, nrm, f), kappa, dirs);
  FarFieldCheck c;
  double ref_max = 0.0, err_max = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto ref = dipole_far_field(dirs[i], dip, kappa);
    const double e = ff.E[i].norm();
    c.max_tangential =
        std::max(c.max_tangential, std::abs(bdot(dirs[i].cast<Complex>(), ff.E[i])) / e);
    c.max_relation = std::max(c.max_relation, (ff.H[i] - cross(dirs[i], ff.E[i])).norm() / e);
    ref_max = std::max(ref_max, ref.E.norm());
    err_max = std::max(err_max, (ff.E[i] - ref.E).norm());
  }
  c.error = err_max / ref_max;
  return c;
}

std::vector<ReciprocityCase> reciprocity_cases(const Scenario &s, const ScenarioModel &m) {
  std::mt19937_64 rng(s.reciprocity.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(s.reciprocity.r_min, s.reciprocity.r_max);
  const auto random_unit = [&] {
    Vec3 v(gauss(rng), gauss(rng), gauss(rng));
    return Vec3(v.normalized());
  };
  std::vector<ReciprocityCase> out;
  for (int c = 0; c < s.reciprocity.cases; ++c) {
    const Vec3 d = random_unit();
    Vec3 p = random_unit();
    p = (p - p.dot(d) * d).normalized();
    const Vec3 q = random_unit();
    Vec3 z;
    for (int attempt = 0;; ++attempt) {
      z = uni(rng) * random_unit();
      const auto region = m.mesh().region_of(z);
      if (region && *region == Region::Shell &&
          m.mesh().distance_to(FacetTag::Interface, z) >=
              2.0 * m.mesh().local_h(FacetTag::Interface, z))
        break;
      if (attempt > 100)
        throw Error("no admissible reciprocity point in the configured radius range");
    }
    out.push_back(mixed_reciprocity(m.model(), d, p, z, q));
  }
  return out;
}

ProbeDataReport probe_report(const Scenario &s, const TetMesh &probe_mesh, bool q_normal) {
  const auto &p = s.probe;
  const auto seq = probe_points(p.anchor, p.normal, p.delta, p.J, probe_mesh);
  return probe_data(probe_mesh, s.kappa(), seq, q_normal ? p.normal : p.q);
}

IndicatorRay indicator_ray(const Scenario &s, const ScenarioModel &m) {
  const auto &in = s.indicator;
  std::vector<Vec3> grid;
  for (int i = 0; i < in.steps; ++i)
    grid.push_back(in.start + (in.end - in.start) * (static_cast<double>(i) / (in.steps - 1)));
  IndicatorRay r;
  r.map = indicator_map(m.model(), grid, in.q);
  for (const auto &z : grid)
    r.distance.push_back(m.mesh().distance_to(FacetTag::Interface, z));
  r.monotone = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool outward = r.distance[i] > r.distance[i - 1];
    const double a = r.map.values[i - 1], b = r.map.values[i];
    if (!(outward ? b < a : b > a))
      r.monotone = false;
  }
  const auto nearest = [&](double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (std::abs(r.distance[i] - target) < std::abs(r.distance[best] - target))
        best = i;
    return best;
  };
  const double far = r.map.values[nearest(in.far_distance)];
  r.near_far = far > 0.0 ? r.map.values[nearest(in.near_distance)] / far : 0.0;
  return r;
}

} // namespace emel
