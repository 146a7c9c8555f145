#include "emel/scenario.hpp"

#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace emel {

namespace pt = boost::property_tree;

Complex parse_complex(const std::string &text) {
  static const std::regex pair(R"(^\s*\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*$)");
  static const std::regex real(R"(^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*$)");
  static const std::regex imag(R"(^\s*([-+]?[0-9.]*(?:[eE][-+]?[0-9]+)?)\s*i\s*$)");
  static const std::regex both(
      R"(^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*([-+])\s*([0-9.]*(?:[eE][-+]?[0-9]+)?)\s*i\s*$)");
  const auto num = [&](const std::string &s, double unit) {
    if (s.empty() || s == "+")
      return unit;
    if (s == "-")
      return -unit;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw ConfigError("malformed number '" + s + "'");
    return v;
  };
  std::smatch m;
  try {
    if (std::regex_match(text, m, pair))
      return {num(m[1], 1.0), num(m[2], 1.0)};
    if (std::regex_match(text, m, real))
      return {num(m[1], 1.0), 0.0};
    if (std::regex_match(text, m, imag))
      return {0.0, num(m[1], 1.0)};
    if (std::regex_match(text, m, both)) {
      const double im = num(m[3], 1.0);
      return {num(m[1], 1.0), m[2] == "-" ? -im : im};
    }
  } catch (const std::logic_error &) {
  }
  throw ConfigError("cannot parse complex number '" + text + "'");
}

namespace {

// Accepted keys per section; anything else is reported as a typo.
const std::map<std::string, std::set<std::string>> kSchema = {
    {"scenario", {"name", "experiment"}},
    {"mesh", {"path", "levels", "radius"}},
    {"material", {"lambda", "mu", "voigt", "density"}},
    {"medium", {"eps0", "mu0", "omega"}},
    {"coupling", {"b1", "b2"}},
    {"incident", {"type", "d", "p", "z", "q"}},
    {"solver", {"dtn_order", "threads"}},
    {"output", {"dir"}},
    {"manufactured", {"source", "moment", "direction"}},
    {"reciprocity", {"cases", "seed", "r_min", "r_max", "tolerance"}},
    {"probe", {"mesh", "anchor", "normal", "delta", "J", "q", "band"}},
    {"indicator", {"q", "start", "end", "steps", "near_distance", "far_distance", "min_ratio"}},
    {"thresholds",
     {"energy_ratio", "energy_contrast", "min_slope", "stability_spread", "far_field_tolerance",
      "determinism_drift"}},
};

class Reader {
public:
  Reader(const pt::ptree &tree, std::filesystem::path base) : tree_(tree), base_(std::move(base)) {}

  bool has(const std::string &sec, const std::string &key) const {
    return tree_.get_child_optional(pt::path(sec + "/" + key, '/')).has_value();
  }

  std::string text(const std::string &sec, const std::string &key) const {
    const auto v = tree_.get_optional<std::string>(pt::path(sec + "/" + key, '/'));
    if (!v)
      throw ConfigError(where(sec, key) + ": required key missing");
    return *v;
  }

  template <class T> T get(const std::string &sec, const std::string &key, T fallback) const {
    if (!has(sec, key))
      return fallback;
    const std::string s = text(sec, key);
    if constexpr (std::is_same_v<T, std::string>) {
      if (s.empty())
        throw ConfigError(where(sec, key) + ": empty value");
      return s;
    }
    std::istringstream is(s);
    T v{};
    is >> v;
    const bool parsed = !is.fail();
    is >> std::ws;
    if (!parsed || !is.eof())
      throw ConfigError(where(sec, key) + ": cannot parse '" + s + "'");
    return v;
  }

  double positive(const std::string &sec, const std::string &key, double fallback) const {
    const double v = get<double>(sec, key, fallback);
    if (!(v > 0.0))
      throw ConfigError(where(sec, key) + ": must be positive");
    return v;
  }

  std::vector<double> numbers(const std::string &sec, const std::string &key) const {
    std::string s = text(sec, key);
    for (char &c : s)
      if (c == ',')
        c = ' ';
    std::istringstream is(s);
    std::vector<double> out;
    double v;
    while (is >> v)
      out.push_back(v);
    if (!is.eof())
      throw ConfigError(where(sec, key) + ": cannot parse '" + text(sec, key) + "'");
    return out;
  }

  Vec3 vec(const std::string &sec, const std::string &key, const Vec3 &fallback) const {
    if (!has(sec, key))
      return fallback;
    const auto v = numbers(sec, key);
    if (v.size() != 3)
      throw ConfigError(where(sec, key) + ": expected three numbers");
    return {v[0], v[1], v[2]};
  }

  Complex complex(const std::string &sec, const std::string &key, Complex fallback) const {
    if (!has(sec, key))
      return fallback;
    try {
      return parse_complex(text(sec, key));
    } catch (const ConfigError &e) {
      throw ConfigError(where(sec, key) + ": " + e.what());
    }
  }

  std::filesystem::path file(const std::string &sec, const std::string &key) const {
    return resolve(text(sec, key), sec, key);
  }

  std::filesystem::path resolve(const std::string &raw, const std::string &sec,
                                const std::string &key) const {
    std::filesystem::path p(raw);
    if (p.is_relative())
      p = base_ / p;
    p = p.lexically_normal();
    if (!std::filesystem::exists(p))
      throw ConfigError(where(sec, key) + ": file not found: " + p.string());
    return p;
  }

  static std::string where(const std::string &sec, const std::string &key) {
    return "[" + sec + "] " + key;
  }

private:
  const pt::ptree &tree_;
  std::filesystem::path base_;
};

void check_schema(const pt::ptree &tree) {
  for (const auto &[sec, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + sec + "' outside any section");
    const auto it = kSchema.find(sec);
    if (it == kSchema.end())
      throw ConfigError("unknown section [" + sec + "]");
    for (const auto &[key, value] : body)
      if (!it->second.count(key))
        throw ConfigError(Reader::where(sec, key) + ": unknown key");
  }
}

Vec3 unit(const Reader &r, const std::string &sec, const std::string &key, const Vec3 &fallback) {
  const Vec3 v = r.vec(sec, key, fallback);
  if (!(v.norm() > 0.0))
    throw ConfigError(Reader::where(sec, key) + ": must be a nonzero vector");
  return v.normalized();
}

} // namespace

Scenario load_scenario(const std::filesystem::path &path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(e.filename() + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  check_schema(tree);
  const Reader r(tree, path.parent_path());

  Scenario s;
  s.config = path;
  s.name = r.get<std::string>("scenario", "name", path.stem().string());
  const auto exp = r.get<std::string>("scenario", "experiment", "scattering");
  if (exp == "scattering")
    s.experiment = Experiment::Scattering;
  else if (exp == "manufactured")
    s.experiment = Experiment::Manufactured;
  else
    throw ConfigError("[scenario] experiment: expected 'scattering' or 'manufactured'");

  s.radius = r.positive("mesh", "radius", 2.0);
  if (r.has("mesh", "levels")) {
    std::istringstream is(r.text("mesh", "levels"));
    std::string item;
    while (std::getline(is, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b == std::string::npos)
        continue;
      s.levels.push_back(r.resolve(item.substr(b, e - b + 1), "mesh", "levels"));
    }
  }
  if (r.has("mesh", "path"))
    s.mesh = r.file("mesh", "path");
  else if (!s.levels.empty())
    s.mesh = s.levels.back();
  else
    throw ConfigError("[mesh] path: required key missing");

  try {
    if (r.has("material", "voigt")) {
      const auto v = r.numbers("material", "voigt");
      if (v.size() != 21)
        throw ConfigError("[material] voigt: expected 21 upper-triangle entries");
      std::array<double, 21> a{};
      std::copy(v.begin(), v.end(), a.begin());
      s.stiffness = StiffnessTensor::from_voigt(a);
      s.isotropic = false;
    } else {
      s.lame_lambda = r.get<double>("material", "lambda", 2.0);
      s.lame_mu = r.get<double>("material", "mu", 1.0);
      s.stiffness = StiffnessTensor::isotropic(s.lame_lambda, s.lame_mu);
    }
  } catch (const MaterialError &e) {
    throw ConfigError(std::string("[material]: ") + e.what());
  }
  s.density = r.positive("material", "density", 1.0);
  s.eps0 = r.positive("medium", "eps0", 1.0);
  s.mu0 = r.positive("medium", "mu0", 1.0);
  s.omega = r.positive("medium", "omega", 2.0);
  s.coupling.b1 = r.complex("coupling", "b1", 1.0);
  s.coupling.b2 = r.complex("coupling", "b2", Complex(0.0, 1.0));

  const auto type = r.get<std::string>("incident", "type", "plane_wave");
  if (type == "plane_wave") {
    PlaneWave pw;
    pw.d = unit(r, "incident", "d", Vec3::UnitZ());
    pw.p = r.vec("incident", "p", Vec3::UnitX());
    if (std::abs(pw.d.dot(pw.p)) > 1e-12 * pw.p.norm())
      throw ConfigError("[incident] p: polarization must be orthogonal to d");
    s.incident = pw;
  } else if (type == "dipole") {
    ElectricDipole dip;
    dip.z = r.vec("incident", "z", Vec3(0.0, 0.0, 1.6));
    dip.q = r.vec("incident", "q", Vec3::UnitX());
    s.incident = dip;
  } else {
    throw ConfigError("[incident] type: expected 'plane_wave' or 'dipole'");
  }

  s.dtn_order = r.get<int>("solver", "dtn_order", 10);
  if (s.dtn_order < 1 || s.dtn_order > kHankelMaxOrder)
    throw ConfigError("[solver] dtn_order: must lie in 1.." + std::to_string(kHankelMaxOrder));
  s.threads = r.get<int>("solver", "threads", 1);
  if (s.threads < 1)
    throw ConfigError("[solver] threads: must be >= 1");
  s.output = r.get<std::string>("output", "dir", "out");

  auto &m = s.manufactured;
  m.source = r.vec("manufactured", "source", m.source);
  m.moment = r.vec("manufactured", "moment", m.moment);
  m.direction = unit(r, "manufactured", "direction", m.direction);
  if (s.experiment == Experiment::Manufactured && !s.isotropic)
    throw ConfigError("[material]: the manufactured experiment needs an isotropic material");

  auto &rc = s.reciprocity;
  rc.cases = r.get<int>("reciprocity", "cases", rc.cases);
  rc.seed = r.get<unsigned>("reciprocity", "seed", rc.seed);
  rc.r_min = r.positive("reciprocity", "r_min", rc.r_min);
  rc.r_max = r.positive("reciprocity", "r_max", rc.r_max);
  rc.tolerance = r.positive("reciprocity", "tolerance", rc.tolerance);
  if (rc.r_max < rc.r_min || rc.r_max >= s.radius)
    throw ConfigError("[reciprocity] r_max: need r_min <= r_max < radius");

  auto &pr = s.probe;
  pr.mesh = r.has("probe", "mesh") ? r.file("probe", "mesh") : s.mesh;
  pr.anchor = r.vec("probe", "anchor", pr.anchor);
  pr.normal = unit(r, "probe", "normal", pr.normal);
  pr.delta = r.positive("probe", "delta", pr.delta);
  pr.J = r.get<int>("probe", "J", pr.J);
  if (pr.J < 1)
    throw ConfigError("[probe] J: must be >= 1");
  if (r.has("probe", "q")) {
    if (r.text("probe", "q") == "normal") {
      pr.q_normal = true;
    } else {
      pr.q_normal = false;
      pr.q = r.vec("probe", "q", pr.q);
    }
  }
  pr.band = r.positive("probe", "band", pr.band);

  auto &in = s.indicator;
  in.q = r.vec("indicator", "q", in.q);
  in.start = r.vec("indicator", "start", in.start);
  in.end = r.vec("indicator", "end", in.end);
  in.steps = r.get<int>("indicator", "steps", in.steps);
  if (in.steps < 2)
    throw ConfigError("[indicator] steps: must be >= 2");
  in.near_distance = r.positive("indicator", "near_distance", in.near_distance);
  in.far_distance = r.positive("indicator", "far_distance", in.far_distance);
  in.min_ratio = r.positive("indicator", "min_ratio", in.min_ratio);

  auto &t = s.thresholds;
  t.energy_ratio = r.positive("thresholds", "energy_ratio", t.energy_ratio);
  t.energy_contrast = r.positive("thresholds", "energy_contrast", t.energy_contrast);
  t.min_slope = r.positive("thresholds", "min_slope", t.min_slope);
  t.stability_spread = r.positive("thresholds", "stability_spread", t.stability_spread);
  t.far_field_tolerance = r.positive("thresholds", "far_field_tolerance", t.far_field_tolerance);
  t.determinism_drift = r.positive("thresholds", "determinism_drift", t.determinism_drift);
  return s;
}

} // namespace emel
