// Acceptance gate: one PASS/FAIL line per criterion. Thresholds come from
// the scenario files where they are configurable.
#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "emel/experiments.hpp"

using namespace emel;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = EMEL_SOURCE_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

template <class F> CMat3 fd_jacobian(F f, const Vec3 &x, double h) {
  CMat3 J;
  for (int l = 0; l < 3; ++l) {
    Vec3 e = Vec3::Zero();
    e(l) = h;
    J.col(l) = (-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * h);
  }
  return J;
}

CVec3 curl_of(const CMat3 &J) { return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)}; }

// Cached factorized models per mesh level of the sphere scenario.
class Models {
public:
  explicit Models(const Scenario &s) : s_(s) {}
  const ScenarioModel &level(std::size_t i) {
    auto &slot = cache_[i];
    if (!slot)
      slot = std::make_unique<ScenarioModel>(s_, s_.levels.at(i));
    return *slot;
  }
  std::size_t count() const { return s_.levels.size(); }

private:
  const Scenario &s_;
  std::map<std::size_t, std::unique_ptr<ScenarioModel>> cache_;
};

Verdict kernels() {
  const double kappa = 2.0;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::normal_distribution<double> g;
  double maxwell = 0.0, hess = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 d = Vec3(g(rng), g(rng), g(rng)).normalized();
    Vec3 p = Vec3(g(rng), g(rng), g(rng));
    p = (p - p.dot(d) * d).normalized();
    ElectricDipole dip{Vec3(box(rng), box(rng), box(rng)) / 3.0,
                       Vec3(g(rng), g(rng), g(rng)), 1.0};
    Vec3 x;
    do
      x = Vec3(box(rng), box(rng), box(rng));
    while ((x - dip.z).norm() < 0.5);
    const double h = 1e-3;
    const auto pw = plane_wave(x, d, p, kappa);
    const auto fE = [&](const Vec3 &y) { return plane_wave(y, d, p, kappa).E; };
    const auto fH = [&](const Vec3 &y) { return plane_wave(y, d, p, kappa).H; };
    maxwell = std::max({maxwell,
                        (curl_of(fd_jacobian(fE, x, h)) - kI * kappa * pw.H).norm() / pw.H.norm() /
                            kappa,
                        (curl_of(fd_jacobian(fH, x, h)) + kI * kappa * pw.E).norm() / pw.E.norm() /
                            kappa});
    const auto dp = dipole_pair(x, dip, kappa);
    const auto dE = [&](const Vec3 &y) { return dipole_pair(y, dip, kappa).E; };
    const auto dH = [&](const Vec3 &y) { return dipole_pair(y, dip, kappa).H; };
    maxwell = std::max({maxwell,
                        (curl_of(fd_jacobian(dE, x, h)) - kI * kappa * dp.H).norm() /
                            (kappa * dp.H.norm()),
                        (curl_of(fd_jacobian(dH, x, h)) + kI * kappa * dp.E).norm() /
                            (kappa * dp.E.norm())});
    const auto grad = [&](const Vec3 &y) { return fundamental_solution(y, dip.z, kappa).grad; };
    const CMat3 H = hessian_explicit(x, dip.z, kappa);
    hess = std::max(hess, (fd_jacobian(grad, x, h) - H).norm() / H.norm());
  }
  double wr = 0.0;
  for (int n = 0; n <= 15; ++n)
    for (int k = 0; k <= 78; ++k) {
      const double x = 0.5 + 0.25 * k;
      const auto [j, dj] = spherical_bessel_j(n, x);
      const auto [y, dy] = spherical_bessel_y(n, x);
      wr = std::max(wr, std::abs(x * x * (j * dy - dj * y) - 1.0));
      const auto [h, dh] = spherical_hankel(n, x);
      wr = std::max(wr, std::abs(h - Complex(j, y)) / std::abs(h));
      (void)dh;
    }
  Verdict v;
  v.pass = maxwell < 1e-8 && hess < 1e-6 && wr < 1e-10;
  v.detail = "Maxwell residual " + sci(maxwell) + " (< 1e-8), Hessian vs FD " + sci(hess) +
             " (< 1e-6), Hankel Wronskian " + sci(wr) + " (< 1e-10)";
  return v;
}

Verdict dtn() {
  const double kappa = 2.0, R = 2.0;
  const ElectricDipole dip{Vec3(0.3, -0.2, 0.4), Vec3(0.5, 0.3, -0.8), 1.0};
  const auto rule = sphere_rule(48);
  std::vector<Vec3> pts;
  std::vector<double> w;
  std::vector<CVec3> lam, target;
  for (std::size_t i = 0; i < rule.xhat.size(); ++i) {
    const Vec3 &xh = rule.xhat[i];
    pts.push_back(R * xh);
    w.push_back(R * R * rule.weights[i]);
    const auto f = dipole_pair(pts.back(), dip, kappa);
    lam.push_back(cross(xh, f.H));
    target.push_back(cross(xh, CVec3(-kI * kappa * f.E))); // xhat x curl H
  }
  std::vector<double> res;
  std::string seq;
  for (int N = 3; N <= 15; N += 2) {
    const auto op = build_calderon(kappa, R, N);
    const auto G = apply_dtn(op, project_trace(pts, w, lam, R, N));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      num += w[i] * (target[i] - kI * kappa * G.evaluate(pts[i], R)).squaredNorm();
      den += w[i] * target[i].squaredNorm();
    }
    res.push_back(std::sqrt(num / den));
    seq += (seq.empty() ? "" : ", ") + sci(res.back());
  }
  bool geometric = true;
  for (std::size_t i = 1; i < res.size(); ++i)
    geometric = geometric && res[i] < 0.9 * res[i - 1];

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> order(1, 15);
  const auto quad = sphere_rule(24);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const int N = order(rng);
    const auto op = build_calderon(kI, R, N);
    auto lam_t = SphericalTraceExpansion::zero(N);
    for (int k = 0; k < mode_count(N); ++k) {
      lam_t.a(k) = Complex(g(rng), g(rng));
      lam_t.b(k) = Complex(g(rng), g(rng));
    }
    const auto Gl = apply_dtn(op, lam_t);
    Complex pairing = 0.0;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < quad.xhat.size(); ++i) {
      const Vec3 x = R * quad.xhat[i];
      const CVec3 l = lam_t.evaluate(x, R);
      pairing += R * R * quad.weights[i] * bdot(Gl.evaluate(x, R), cross(CVec3(l.conjugate()), quad.xhat[i]));
      norm2 += R * R * quad.weights[i] * l.squaredNorm();
    }
    worst = std::max(worst, pairing.real() / norm2);
  }
  Verdict v;
  v.pass = res.back() < 0.01 && geometric && worst < 0.0;
  v.detail = "residual N=3..15: " + seq + "; sign property max Re<G~l, conj(l) x xhat>/||l||^2 = " +
             sci(worst) + " (< 0)";
  return v;
}

Verdict convergence(const Scenario &man, Models &models) {
  std::vector<LevelResult> rows;
  for (std::size_t i = 0; i < models.count(); ++i)
    rows.push_back(manufactured_level(man, models.level(i)));
  const auto t = make_table(std::move(rows));
  const auto &m = models.level(models.count() - 1).model();
  const CVector x = m.solve_rhs(CVector::Zero(m.system().layout.size()));
  const double zero = x.norm();
  Verdict v;
  v.pass = t.monotone() && t.min_slope() >= man.thresholds.min_slope && zero <= 1e-10;
  std::string errs, slopes;
  for (const auto &l : t.levels)
    errs += (errs.empty() ? "" : ", ") + sci(l.errors.total());
  for (double s : t.slopes)
    slopes += (slopes.empty() ? "" : ", ") + std::to_string(s).substr(0, 5);
  v.detail = "errors " + errs + "; slopes " + slopes + " (>= " +
             std::to_string(man.thresholds.min_slope).substr(0, 4) + "); zero data -> ||x|| = " +
             sci(zero);
  return v;
}

Verdict energy(const Scenario &s, Models &models) {
  std::vector<double> r;
  std::string seq;
  for (std::size_t i = 0; i < models.count(); ++i) {
    r.push_back(energy_report(s, models.level(i)).ratio);
    seq += (seq.empty() ? "" : ", ") + sci(r.back());
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < r.size(); ++i)
    decreasing = decreasing && r[i] < r[i - 1];
  const ScenarioModel bad(s, s.levels.back(), s.threads, CouplingConstants{1.0, 1.0}, false);
  const double rb = energy_report(s, bad).ratio;
  Verdict v;
  v.pass = decreasing && r.back() < s.thresholds.energy_ratio &&
           rb >= s.thresholds.energy_contrast * r.back();
  v.detail = "r per level " + seq + " (fine < " + sci(s.thresholds.energy_ratio) +
             ", strictly decreasing); inadmissible b1=1,b2=1: r = " + sci(rb) + " (" +
             sci(rb / r.back()) + "x)";
  return v;
}

Verdict far_field_contract(const Scenario &s, Models &models) {
  const ElectricDipole dip{Vec3(0.2, -0.1, 0.3), Vec3(0.5, 0.3, -0.8), 1.0};
  const auto c = far_field_oracle(models.level(models.count() - 1).mesh(), s.kappa(), dip, 2);
  Verdict v;
  v.pass = c.max_tangential < 1e-3 && c.max_relation < 1e-3 &&
           c.error < s.thresholds.far_field_tolerance;
  v.detail = "max |xhat.E|/|E| " + sci(c.max_tangential) + ", max |H - xhat x E|/|E| " +
             sci(c.max_relation) + " (< 1e-3); closed-form error " + sci(c.error) + " (< " +
             sci(s.thresholds.far_field_tolerance) + ")";
  return v;
}

Verdict reciprocity(const Scenario &s, Models &models) {
  std::vector<double> worst;
  std::string seq;
  for (std::size_t i = 0; i < models.count(); ++i) {
    double w = 0.0;
    for (const auto &c : reciprocity_cases(s, models.level(i)))
      w = std::max(w, c.residual);
    worst.push_back(w);
    seq += (seq.empty() ? "" : ", ") + sci(w);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < worst.size(); ++i)
    decreasing = decreasing && worst[i] < worst[i - 1];
  Verdict v;
  v.pass = decreasing && worst.back() < s.reciprocity.tolerance;
  v.detail = std::to_string(s.reciprocity.cases) + " random cases, max residual per level " + seq +
             " (fine < " + sci(s.reciprocity.tolerance) + ", decreasing)";
  return v;
}

Verdict probe(const Scenario &s) {
  const auto mesh = load_mesh(s.probe.mesh.string(), s.radius);
  const auto rep = probe_report(s, mesh, true);
  const double b1 = rep.band(&ProbeRow::f1), b2 = rep.band(&ProbeRow::div_f2),
               b3 = rep.band(&ProbeRow::f2);
  int resolved = 0;
  for (const auto &r : rep.rows)
    resolved += r.resolved ? 1 : 0;
  Verdict v;
  v.pass = resolved >= 2 && b1 < s.probe.band && b2 < s.probe.band && b3 < s.probe.band &&
           rep.hi_monotone();
  v.detail = std::to_string(resolved) + " resolved j; bands f1 " + sci(b1) + ", Div f2 " +
             sci(b2) + ", f2 " + sci(b3) + " (< " + sci(s.probe.band) + "); ||H^i||_Hcurl(D0) " +
             sci(rep.rows.front().hi_hcurl) + " -> " + sci(rep.rows.back().hi_hcurl) +
             (rep.hi_monotone() ? " monotone" : " NOT monotone");
  return v;
}

Verdict indicator(const Scenario &s, Models &models) {
  const auto ray = indicator_ray(s, models.level(models.count() - 1));
  Verdict v;
  v.pass = ray.monotone && ray.near_far >= s.indicator.min_ratio;
  v.detail = std::string(ray.monotone ? "monotone" : "NOT monotone") + " along the ray; near/far " +
             sci(ray.near_far) + " (>= " + sci(s.indicator.min_ratio) + ")";
  return v;
}

Verdict stability(const Scenario &s, Models &models) {
  std::vector<double> r;
  std::string seq;
  for (std::size_t i = 0; i < models.count(); ++i) {
    r.push_back(stability_ratio(models.level(i)));
    seq += (seq.empty() ? "" : ", ") + sci(r.back());
  }
  const double spread =
      *std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end());
  Verdict v;
  v.pass = spread < s.thresholds.stability_spread;
  v.detail = "response ratio per level " + seq + "; spread " + sci(spread) + " (< " +
             sci(s.thresholds.stability_spread) + ")";
  return v;
}

Verdict determinism(const Scenario &s) {
  const auto &mesh = s.levels.front();
  const auto run = [&](int threads) {
    const ScenarioModel m(s, mesh, threads, s.coupling);
    CVector x = scatter(s, m);
    const auto ff = m.model().far_field(x, direction_grid(4));
    CVector all(x.size() + 3 * static_cast<Eigen::Index>(ff.E.size()));
    all.head(x.size()) = x;
    for (std::size_t i = 0; i < ff.E.size(); ++i)
      all.segment<3>(x.size() + 3 * static_cast<Eigen::Index>(i)) = ff.E[i];
    return all;
  };
  const CVector a = run(1), b = run(1), c = run(4);
  const bool identical =
      a.size() == b.size() &&
      std::memcmp(a.data(), b.data(), sizeof(Complex) * static_cast<std::size_t>(a.size())) == 0;
  const double drift = (a - c).norm() / a.norm();
  Verdict v;
  v.pass = identical && drift < s.thresholds.determinism_drift;
  v.detail = std::string(identical ? "bit-identical" : "NOT bit-identical") +
             " at 1 thread; drift 1 vs 4 threads " + sci(drift) + " (< " +
             sci(s.thresholds.determinism_drift) + ")";
  return v;
}

} // namespace

int main() {
  const auto sphere = load_scenario(kRoot / "scenarios" / "sphere.ini");
  const auto manufactured = load_scenario(kRoot / "scenarios" / "manufactured.ini");
  Models models(sphere);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"kernel identities", [] { return kernels(); }},
      {"DtN correctness", [] { return dtn(); }},
      {"forward-solver convergence", [&] { return convergence(manufactured, models); }},
      {"energy balance", [&] { return energy(sphere, models); }},
      {"far-field contract", [&] { return far_field_contract(sphere, models); }},
      {"mixed reciprocity", [&] { return reciprocity(sphere, models); }},
      {"probe experiment", [&] { return probe(sphere); }},
      {"indicator behavior", [&] { return indicator(sphere, models); }},
      {"stability", [&] { return stability(sphere, models); }},
      {"determinism", [&] { return determinism(sphere); }},
  };
  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception &e) {
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    passed += v.pass ? 1 : 0;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].first << ": "
              << v.detail << "  (" << std::fixed << std::setprecision(1) << secs << " s)"
              << std::defaultfloat << std::endl;
  }
  std::cout << "acceptance: " << passed << "/" << criteria.size() << " passed" << std::endl;
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
