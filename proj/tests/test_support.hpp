#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "emel/types.hpp"

namespace emel::test {

inline std::string mesh_path(const std::string &name) {
  return (std::filesystem::path(EMEL_SOURCE_DIR) / "data" / "meshes" / name).string();
}

inline std::filesystem::path scenario_path(const std::string &name) {
  return std::filesystem::path(EMEL_SOURCE_DIR) / "scenarios" / name;
}

inline Vec3 random_unit(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

inline CVec3 random_cvec(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  return {Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
}

} // namespace emel::test
