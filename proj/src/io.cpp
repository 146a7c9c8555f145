#include "emel/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace emel {

std::string sha256_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read " + path.string());
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

namespace {

std::ofstream open(const std::filesystem::path &path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void put(std::ostream &os, const CVec3 &v) {
  for (int i = 0; i < 3; ++i)
    os << ',' << v(i).real() << ',' << v(i).imag();
}

void put_vec(std::ostream &os, const Vec3 &v) { os << v(0) << ',' << v(1) << ',' << v(2); }

void vtk_complex(std::ostream &os, const std::string &name, const std::vector<CVec3> &v) {
  for (const char *part : {"_re", "_im"}) {
    os << "VECTORS " << name << part << " double\n";
    for (const auto &x : v) {
      const Vec3 r = part[1] == 'r' ? Vec3(x.real()) : Vec3(x.imag());
      os << r(0) << ' ' << r(1) << ' ' << r(2) << '\n';
    }
  }
}

} // namespace

void write_vtk(const std::filesystem::path &path, const TetMesh &mesh, const CoupledSystem &sys,
               const CVector &x, double kappa) {
  auto os = open(path);
  const auto &V = mesh.vertices();
  const auto &T = mesh.tets();
  os << "# vtk DataFile Version 3.0\nemel solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << V.size() << " double\n";
  for (const auto &v : V)
    os << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
  os << "CELLS " << T.size() << ' ' << 5 * T.size() << '\n';
  for (const auto &t : T)
    os << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  os << "CELL_TYPES " << T.size() << '\n';
  for (std::size_t i = 0; i < T.size(); ++i)
    os << "10\n";

  std::vector<CVec3> u(V.size(), CVec3::Zero()), H(V.size(), CVec3::Zero()),
      E(V.size(), CVec3::Zero());
  std::vector<int> count(V.size(), 0);
  for (int v : sys.u_space.vertices())
    u[static_cast<std::size_t>(v)] = x.segment<3>(3 * sys.u_space.local_vertex(v));
  for (int t : sys.h_space.tets()) {
    const CVec3 e = -eval_curl_H(mesh, sys, x, t) / (kI * kappa);
    for (int c = 0; c < 4; ++c) {
      std::array<double, 4> b{};
      b[static_cast<std::size_t>(c)] = 1.0;
      const auto v = static_cast<std::size_t>(T[static_cast<std::size_t>(t)][c]);
      H[v] += eval_H(mesh, sys, x, t, b);
      E[v] += e;
      ++count[v];
    }
  }
  for (std::size_t v = 0; v < V.size(); ++v)
    if (count[v] > 0) {
      H[v] /= static_cast<double>(count[v]);
      E[v] /= static_cast<double>(count[v]);
    }
  os << "POINT_DATA " << V.size() << '\n';
  vtk_complex(os, "u", u);
  vtk_complex(os, "H", H);
  vtk_complex(os, "E", E);
  os << "CELL_DATA " << T.size() << "\nSCALARS region int 1\nLOOKUP_TABLE default\n";
  for (auto r : mesh.regions())
    os << static_cast<int>(r) << '\n';
}

void write_far_field_csv(const std::filesystem::path &path, const FarFieldPattern &ff) {
  auto os = open(path);
  os << "theta,phi,Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im,Hx_re,Hx_im,Hy_re,Hy_im,Hz_re,Hz_im\n";
  for (std::size_t i = 0; i < ff.directions.size(); ++i) {
    const Vec3 &d = ff.directions[i];
    os << std::acos(std::clamp(d(2), -1.0, 1.0)) << ',' << std::atan2(d(1), d(0));
    put(os, ff.E[i]);
    put(os, ff.H[i]);
    os << '\n';
  }
}

void write_reciprocity_csv(const std::filesystem::path &path,
                           const std::vector<ReciprocityCase> &cases) {
  auto os = open(path);
  os << "dx,dy,dz,px,py,pz,zx,zy,zz,qx,qy,qz,lhs_re,lhs_im,rhs_re,rhs_im,residual,warning\n";
  for (const auto &c : cases) {
    for (const Vec3 *v : {&c.d, &c.p, &c.z, &c.q}) {
      put_vec(os, *v);
      os << ',';
    }
    os << c.lhs.real() << ',' << c.lhs.imag() << ',' << c.rhs.real() << ',' << c.rhs.imag() << ','
       << c.residual << ",\"" << c.warning << "\"\n";
  }
}

void write_probe_csv(const std::filesystem::path &path, const ProbeDataReport &rep) {
  auto os = open(path);
  os << "j,f1_L2,div_f2_L2,f2_L2,Hi_Hcurl_D0,resolved\n";
  for (const auto &r : rep.rows)
    os << r.j << ',' << r.f1 << ',' << r.div_f2 << ',' << r.f2 << ',' << r.hi_hcurl << ','
       << (r.resolved ? 1 : 0) << '\n';
}

void write_indicator_csv(const std::filesystem::path &path, const IndicatorMap &map) {
  auto os = open(path);
  os << "x,y,z,I,note\n";
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    put_vec(os, map.points[i]);
    os << ',' << map.values[i] << ",\"" << map.notes[i] << "\"\n";
  }
}

void write_convergence_csv(const std::filesystem::path &path, const ConvergenceTable &t) {
  auto os = open(path);
  os << "mesh,h,dofs,u_L2,u_H1,H_L2,H_Hcurl,total,slope\n";
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    const auto &l = t.levels[i];
    os << l.mesh << ',' << l.h << ',' << l.dofs << ',' << l.errors.u_L2 << ',' << l.errors.u_H1
       << ',' << l.errors.H_L2 << ',' << l.errors.H_Hcurl << ',' << l.errors.total() << ',';
    if (i > 0)
      os << t.slopes[i - 1];
    os << '\n';
  }
}

Manifest::Manifest(std::string subcommand, int threads)
    : subcommand_(std::move(subcommand)), threads_(threads) {}

void Manifest::input(const std::filesystem::path &p) { inputs_.push_back(p); }
void Manifest::output(const std::filesystem::path &p) { outputs_.push_back(p); }
void Manifest::value(const std::string &key, const std::string &v) { values_[key] = v; }

void Manifest::write(const std::filesystem::path &dir) const {
  nlohmann::ordered_json j;
  j["tool"] = "emel";
  j["version"] = kVersion;
  j["subcommand"] = subcommand_;
  j["threads"] = threads_;
  j["passed"] = passed_;
  auto files = [](const std::vector<std::filesystem::path> &v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto &p : v)
      a.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    return a;
  };
  j["inputs"] = files(inputs_);
  j["outputs"] = files(outputs_);
  j["values"] = values_;
  auto os = open(dir / "manifest.json");
  os << j.dump(2) << '\n';
}

} // namespace emel
