#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "emel/fem.hpp"

namespace emel {

enum class Experiment { Scattering, Manufactured };

/// Parameters of the manufactured solution: H* = curl(q Phi(., source)) outside
/// the body and a plane P wave u* = direction exp(i k_p direction . x) inside.
struct ManufacturedSpec {
  Vec3 source{0.1, 0.2, -0.1};
  Vec3 moment{0.3, -0.5, 0.8};
  Vec3 direction{1.0, 1.0, 1.0};
};

struct ReciprocitySpec {
  int cases = 5;
  unsigned seed = 7;
  double r_min = 1.5; // |z| range of the random dipole points
  double r_max = 1.8;
  double tolerance = 0.05;
};

struct ProbeSpec {
  std::filesystem::path mesh;
  Vec3 anchor{0.0, 0.0, 1.0};
  Vec3 normal{0.0, 0.0, 1.0};
  double delta = 0.2;
  int J = 8;
  bool q_normal = true; // q = nu(z_*); otherwise `q`
  Vec3 q{1.0, 0.0, 0.0};
  double band = 10.0;
};

struct IndicatorSpec {
  Vec3 q{0.0, 0.0, 1.0};
  Vec3 start{0.0, 0.0, 1.2};
  Vec3 end{0.0, 0.0, 1.8};
  int steps = 7;
  double near_distance = 0.2;
  double far_distance = 0.6;
  double min_ratio = 3.0;
};

struct Thresholds {
  double energy_ratio = 0.05;
  double energy_contrast = 5.0;
  double min_slope = 0.8;
  double stability_spread = 2.0;
  double far_field_tolerance = 0.005;
  double determinism_drift = 1e-12;
};

/// A fully validated run description read from an INI file.
struct Scenario {
  std::string name;
  std::filesystem::path config;
  Experiment experiment = Experiment::Scattering;
  std::filesystem::path mesh;                // main mesh
  std::vector<std::filesystem::path> levels; // refinement sequence, coarse to fine
  double radius = 2.0;
  StiffnessTensor stiffness = StiffnessTensor::isotropic(2.0, 1.0);
  bool isotropic = true;
  double lame_lambda = 2.0, lame_mu = 1.0;
  double density = 1.0;
  double eps0 = 1.0, mu0 = 1.0, omega = 2.0;
  CouplingConstants coupling{1.0, Complex(0.0, 1.0)};
  IncidentField incident = PlaneWave{};
  int dtn_order = 10;
  int threads = 1;
  std::filesystem::path output = "out";
  ManufacturedSpec manufactured;
  ReciprocitySpec reciprocity;
  ProbeSpec probe;
  IndicatorSpec indicator;
  Thresholds thresholds;

  BackgroundMedium medium() const { return {eps0, mu0, omega}; }
  double kappa() const { return medium().kappa(); }
};

/// Reads an INI scenario. Relative paths are resolved against the config
/// directory. Throws ConfigError naming the line (syntax) or the
/// [section] key (content) at fault.
Scenario load_scenario(const std::filesystem::path &path);

/// Parses "a", "a+bi", "bi", "i" or "(a,b)".
Complex parse_complex(const std::string &text);

} // namespace emel
