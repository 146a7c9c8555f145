#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "emel/io.hpp"

using namespace emel;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path tmp(const std::string &name) { return fs::temp_directory_path() / "emel_io_test" / name; }

} // namespace

TEST(Io, Sha256KnownVectors) {
  fs::create_directories(tmp(""));
  std::ofstream(tmp("abc.txt"), std::ios::binary) << "abc";
  EXPECT_EQ(sha256_file(tmp("abc.txt")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::ofstream(tmp("empty.txt"), std::ios::binary).close();
  EXPECT_EQ(sha256_file(tmp("empty.txt")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_THROW(sha256_file(tmp("missing.txt")), Error);
}

TEST(Io, ManifestIsDeterministic) {
  fs::create_directories(tmp("m1"));
  fs::create_directories(tmp("m2"));
  std::ofstream(tmp("in.txt")) << "input";
  for (const char *d : {"m1", "m2"}) {
    Manifest m("solve", 2);
    m.input(tmp("in.txt"));
    m.value("residual", "1e-14");
    m.status(true);
    m.write(tmp(d));
  }
  const auto a = slurp(tmp("m1") / "manifest.json");
  EXPECT_EQ(a, slurp(tmp("m2") / "manifest.json"));
  EXPECT_NE(a.find("\"subcommand\": \"solve\""), std::string::npos);
  EXPECT_NE(a.find(sha256_file(tmp("in.txt"))), std::string::npos);
}

TEST(Io, CsvHeaders) {
  FarFieldPattern ff;
  ff.directions = {Vec3::UnitZ()};
  ff.E = {CVec3(1.0, kI, 0.0)};
  ff.H = {CVec3(-kI, 1.0, 0.0)};
  write_far_field_csv(tmp("ff.csv"), ff);
  const auto text = slurp(tmp("ff.csv"));
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "theta,phi,Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im,Hx_re,Hx_im,Hy_re,Hy_im,Hz_re,Hz_im");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);

  ConvergenceTable t;
  t.levels.resize(2);
  t.slopes = {1.0};
  write_convergence_csv(tmp("conv.csv"), t);
  EXPECT_EQ(slurp(tmp("conv.csv")).substr(0, 4), "mesh");
}
