#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "emel/io.hpp"

namespace fs = std::filesystem;
using namespace emel;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfig = 2, kInvariant = 3 };

struct Run {
  Scenario scenario;
  fs::path out;
  int threads = 1;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void print_status(const std::string &what, bool ok) {
  std::cout << (ok ? "ok    " : "FAIL  ") << what << '\n';
}

int cmd_validate(Run &run, Manifest &man) {
  const auto &s = run.scenario;
  bool ok = true;
  const auto report = check_admissible(s.coupling);
  std::cout << "coupling: b1 = " << s.coupling.b1 << ", b2 = " << s.coupling.b2 << "; "
            << report.describe() << '\n';
  require_admissible(s.coupling);
  std::cout << "material: Legendre constant c0 = " << s.stiffness.legendre()
            << ", density = " << s.density << ", kappa = " << s.kappa() << '\n';
  std::vector<fs::path> meshes = s.levels;
  if (meshes.empty())
    meshes.push_back(s.mesh);
  for (const auto &p : meshes) {
    const auto mesh = load_mesh(p.string(), s.radius);
    const VectorNodalSpace U(mesh, Region::Body);
    const EdgeSpace X(mesh, Region::Shell);
    std::cout << p.filename().string() << ": " << mesh.report() << "  DOFs: elastic "
              << U.ndofs() << ", edge " << X.ndofs() << ", total " << U.ndofs() + X.ndofs()
              << '\n';
    man.input(p);
  }
  print_status("scenario valid", ok);
  return ok ? kOk : kCheckFailed;
}

int cmd_solve(Run &run, Manifest &man) {
  const auto &s = run.scenario;
  const ScenarioModel m(s, s.mesh, run.threads, s.coupling);
  man.input(s.mesh);
  double residual = 0.0;
  const CVector x = scatter(s, m, &residual);
  const auto norms = solution_norms(m.mesh(), m.model().system(), x);
  const auto energy = energy_report(s, m);
  const fs::path vtk = run.out / "solution.vtk";
  write_vtk(vtk, m.mesh(), m.model().system(), x, s.kappa());
  man.output(vtk);
  std::cout << "DOFs " << x.size() << ", relative residual " << residual << "\n||u||_H1 = "
            << norms.u_H1 << ", ||H||_Hcurl = " << norms.H_Hcurl
            << "\nenergy flux: Re = " << energy.flux_real << ", Im = " << energy.flux_imag
            << ", ratio r = " << energy.ratio << '\n';
  man.value("residual", fmt(residual));
  man.value("energy_ratio", fmt(energy.ratio));
  bool ok = residual <= 1e-10;
  print_status("residual <= 1e-10", ok);
  if (s.experiment == Experiment::Manufactured) {
    const auto lvl = manufactured_level(s, m);
    std::cout << "manufactured errors: u_H1 " << lvl.errors.u_H1 << ", H_Hcurl "
              << lvl.errors.H_Hcurl << '\n';
    man.value("error_total", fmt(lvl.errors.total()));
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_farfield(Run &run, Manifest &man) {
  const auto &s = run.scenario;
  const ScenarioModel m(s, s.mesh, run.threads, s.coupling);
  man.input(s.mesh);
  const CVector x = scatter(s, m);
  const auto ff = m.model().far_field(x, direction_grid(8));
  const fs::path csv = run.out / "farfield.csv";
  write_far_field_csv(csv, ff);
  man.output(csv);
  double tang = 0.0, rel = 0.0;
  for (std::size_t i = 0; i < ff.directions.size(); ++i) {
    const double e = ff.E[i].norm();
    tang = std::max(tang, std::abs(bdot(ff.directions[i].cast<Complex>(), ff.E[i])) / e);
    rel = std::max(rel, (ff.H[i] - cross(ff.directions[i], ff.E[i])).norm() / e);
  }
  std::cout << ff.directions.size() << " directions; max |xhat.E|/|E| = " << tang
            << ", max |H - xhat x E|/|E| = " << rel << '\n';
  const bool ok = tang < 1e-3 && rel < 1e-3;
  print_status("far-field tangentiality and H = xhat x E", ok);
  return ok ? kOk : kCheckFailed;
}

int cmd_reciprocity(Run &run, Manifest &man) {
  const auto &s = run.scenario;
  const ScenarioModel m(s, s.mesh, run.threads, s.coupling);
  man.input(s.mesh);
  const auto cases = reciprocity_cases(s, m);
  const fs::path csv = run.out / "reciprocity.csv";
  write_reciprocity_csv(csv, cases);
  man.output(csv);
  bool ok = true;
  for (const auto &c : cases) {
    std::cout << "z = (" << c.z.transpose() << "): lhs " << c.lhs << ", rhs " << c.rhs
              << ", residual " << c.residual << (c.warning.empty() ? "" : "  [" + c.warning + "]")
              << '\n';
    ok = ok && c.residual < s.reciprocity.tolerance;
  }
  print_status("mixed reciprocity residual < " + fmt(s.reciprocity.tolerance), ok);
  return ok ? kOk : kCheckFailed;
}

int cmd_probe(Run &run, Manifest &man) {
  const auto &s = run.scenario;
  const auto mesh = load_mesh(s.probe.mesh.string(), s.radius);
  man.input(s.probe.mesh);
  const auto rep = probe_report(s, mesh, s.probe.q_normal);
  const fs::path csv = run.out / "probe.csv";
  write_probe_csv(csv, rep);
  man.output(csv);
  std::cout << "anchor (" << rep.probes.anchor.transpose() << "), q = (" << rep.q.transpose()
            << "), local h " << rep.h_local << ", D0 radius " << rep.d0_radius << '\n';
  for (const auto &r : rep.rows)
    std::cout << "j=" << r.j << "  f1 " << r.f1 << "  Div f2 " << r.div_f2 << "  f2 " << r.f2
              << "  Hi " << r.hi_hcurl << (r.resolved ? "" : "  (under-resolved)") << '\n';
  const double band = std::max({rep.band(&ProbeRow::f1), rep.band(&ProbeRow::div_f2),
                                rep.band(&ProbeRow::f2)});
  std::cout << "data band " << band << ", H^i monotone " << rep.hi_monotone() << '\n';
  const bool ok = band < s.probe.band && rep.hi_monotone();
  print_status("bounded data and growing ||H^i||", ok);
  return ok ? kOk : kCheckFailed;
}

int cmd_indicator(Run &run, Manifest &man) {
  const auto &s = run.scenario;
  const ScenarioModel m(s, s.mesh, run.threads, s.coupling);
  man.input(s.mesh);
  const auto ray = indicator_ray(s, m);
  const fs::path csv = run.out / "indicator.csv";
  write_indicator_csv(csv, ray.map);
  man.output(csv);
  for (std::size_t i = 0; i < ray.map.points.size(); ++i)
    std::cout << "dist " << ray.distance[i] << "  I " << ray.map.values[i] << '\n';
  std::cout << "near/far ratio " << ray.near_far << '\n';
  const bool ok = ray.monotone && ray.near_far >= s.indicator.min_ratio;
  print_status("indicator monotone with near/far >= " + fmt(s.indicator.min_ratio), ok);
  return ok ? kOk : kCheckFailed;
}

int cmd_converge(Run &run, Manifest &man) {
  const auto &s = run.scenario;
  for (const auto &p : s.levels)
    man.input(p);
  if (s.experiment == Experiment::Manufactured) {
    const auto t = manufactured_convergence(s);
    const fs::path csv = run.out / "convergence.csv";
    write_convergence_csv(csv, t);
    man.output(csv);
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
      const auto &l = t.levels[i];
      std::cout << l.mesh << "  h " << l.h << "  dofs " << l.dofs << "  error " << l.errors.total();
      if (i > 0)
        std::cout << "  slope " << t.slopes[i - 1];
      std::cout << '\n';
    }
    const bool ok = t.monotone() && t.min_slope() >= s.thresholds.min_slope;
    print_status("monotone decrease with slopes >= " + fmt(s.thresholds.min_slope), ok);
    return ok ? kOk : kCheckFailed;
  }
  // scattering: energy-balance ratio across levels
  std::vector<double> r;
  for (const auto &p : s.levels) {
    const ScenarioModel m(s, p, run.threads, s.coupling);
    r.push_back(energy_report(s, m).ratio);
    std::cout << p.filename().string() << "  h " << m.mesh().h_max() << "  energy ratio "
              << r.back() << '\n';
  }
  bool ok = !r.empty() && r.back() < s.thresholds.energy_ratio;
  for (std::size_t i = 1; i < r.size(); ++i)
    ok = ok && r[i] < r[i - 1];
  print_status("energy ratio decreasing and below " + fmt(s.thresholds.energy_ratio), ok);
  return ok ? kOk : kCheckFailed;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Coupled elastic-electromagnetic scattering solver"};
  app.require_subcommand(1);
  std::string config, out;
  int threads = 0;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"validate", "check mesh, material and coupling constants"},
      {"solve", "forward solve, VTK output and norms"},
      {"farfield", "far-field pattern as CSV"},
      {"reciprocity", "mixed reciprocity residual table"},
      {"probe", "probe-sequence data report"},
      {"indicator", "boundary indicator along a ray"},
      {"converge", "error or energy ratio across refinement levels"}};
  for (const auto &[name, help] : subs) {
    auto *sc = app.add_subcommand(name, help);
    sc->add_option("--config", config, "scenario INI file")->required()->check(CLI::ExistingFile);
    sc->add_option("--threads", threads, "assembly threads (default from config)")
        ->check(CLI::PositiveNumber);
    sc->add_option("--out", out, "output directory (default from config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  Run run;
  try {
    run.scenario = load_scenario(config);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const Error &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  run.threads = threads > 0 ? threads : run.scenario.threads;
  run.out = (out.empty() ? run.scenario.output : fs::path(out)) / run.scenario.name / name;
  if (run.out.is_relative() && out.empty())
    run.out = run.scenario.config.parent_path() / run.out;
  run.out = run.out.lexically_normal();

  Manifest man(name, run.threads);
  man.input(run.scenario.config);
  int status = kInvariant;
  try {
    if (name == "validate")
      status = cmd_validate(run, man);
    else if (name == "solve")
      status = cmd_solve(run, man);
    else if (name == "farfield")
      status = cmd_farfield(run, man);
    else if (name == "reciprocity")
      status = cmd_reciprocity(run, man);
    else if (name == "probe")
      status = cmd_probe(run, man);
    else if (name == "indicator")
      status = cmd_indicator(run, man);
    else if (name == "converge")
      status = cmd_converge(run, man);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kInvariant;
  }
  man.status(status == kOk);
  fs::create_directories(run.out);
  man.write(run.out);
  std::cout << "outputs in " << run.out.string() << '\n';
  return status;
}
