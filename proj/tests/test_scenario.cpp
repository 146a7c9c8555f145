#include <gtest/gtest.h>

#include <fstream>

#include "emel/scenario.hpp"
#include "test_support.hpp"

using namespace emel;
namespace fs = std::filesystem;

namespace {

fs::path write_ini(const std::string &name, const std::string &text) {
  const fs::path p = fs::temp_directory_path() / ("emel_test_" + name + ".ini");
  std::ofstream(p) << text;
  return p;
}

std::string error_of(const fs::path &p) {
  try {
    load_scenario(p);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

const std::string kMinimal = "[scenario]\nname = t\n[mesh]\npath = " +
                             test::mesh_path("sphere_R2_L1.msh") + "\n";

} // namespace

TEST(Scenario, ParseComplex) {
  EXPECT_EQ(parse_complex("2"), Complex(2.0, 0.0));
  EXPECT_EQ(parse_complex("i"), Complex(0.0, 1.0));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("1.5-2i"), Complex(1.5, -2.0));
  EXPECT_EQ(parse_complex("0.5i"), Complex(0.0, 0.5));
  EXPECT_EQ(parse_complex("(1,-3)"), Complex(1.0, -3.0));
  EXPECT_EQ(parse_complex(" 1e-1+1e1i "), Complex(0.1, 10.0));
  EXPECT_THROW(parse_complex("abc"), ConfigError);
  EXPECT_THROW(parse_complex(""), ConfigError);
  EXPECT_THROW(parse_complex("1+2j"), ConfigError);
}

TEST(Scenario, ShippedConfigsLoad) {
  for (const char *name : {"sphere.ini", "peanut.ini", "manufactured.ini", "inadmissible.ini"}) {
    const auto s = load_scenario(test::scenario_path(name));
    EXPECT_FALSE(s.name.empty());
    for (const auto &p : s.levels)
      EXPECT_TRUE(fs::exists(p)) << p;
  }
  const auto s = load_scenario(test::scenario_path("sphere.ini"));
  EXPECT_EQ(s.coupling.b2, Complex(0.0, 1.0));
  EXPECT_EQ(s.levels.size(), 3u);
  EXPECT_DOUBLE_EQ(s.kappa(), 2.0);
  EXPECT_TRUE(s.probe.q_normal);
  EXPECT_TRUE(std::holds_alternative<PlaneWave>(s.incident));
  EXPECT_EQ(load_scenario(test::scenario_path("manufactured.ini")).experiment,
            Experiment::Manufactured);
}

TEST(Scenario, Defaults) {
  const auto s = load_scenario(write_ini("defaults", kMinimal));
  EXPECT_EQ(s.coupling.b1, Complex(1.0));
  EXPECT_EQ(s.coupling.b2, kI);
  EXPECT_EQ(s.dtn_order, 10);
  EXPECT_EQ(s.threads, 1);
  EXPECT_DOUBLE_EQ(s.thresholds.energy_ratio, 0.05);
}

TEST(Scenario, Errors) {
  EXPECT_NE(error_of(write_ini("unknown", kMinimal + "[material]\nyoungs = 1\n"))
                .find("[material] youngs: unknown key"),
            std::string::npos);
  EXPECT_NE(error_of(write_ini("section", kMinimal + "[nonsense]\na = 1\n")).find("[nonsense]"),
            std::string::npos);
  EXPECT_NE(error_of(write_ini("number", kMinimal + "[material]\nlambda = two\n"))
                .find("[material] lambda"),
            std::string::npos);
  const auto syntax = error_of(write_ini("syntax", "[scenario]\nname = t\n[mesh\n"));
  EXPECT_NE(syntax.find(":3:"), std::string::npos) << syntax;
  EXPECT_THROW(load_scenario("/nonexistent/x.ini"), ConfigError);
  EXPECT_NE(error_of(write_ini("nomesh", "[scenario]\nname = t\n[mesh]\npath = missing.msh\n"))
                .find("missing.msh"),
            std::string::npos);
}
