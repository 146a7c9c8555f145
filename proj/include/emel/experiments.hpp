#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "emel/inverseprobe.hpp"
#include "emel/scenario.hpp"

namespace emel {

/// A mesh together with the factorized forward model of a scenario.
class ScenarioModel {
public:
  ScenarioModel(const Scenario &s, const std::filesystem::path &mesh_path, int threads,
                const CouplingConstants &bc, bool check_admissibility = true);
  ScenarioModel(const Scenario &s, const std::filesystem::path &mesh_path)
      : ScenarioModel(s, mesh_path, s.threads, s.coupling) {}

  const TetMesh &mesh() const { return mesh_; }
  const ForwardModel &model() const { return model_; }
  const std::filesystem::path &mesh_path() const { return path_; }

private:
  std::filesystem::path path_;
  TetMesh mesh_;
  ForwardModel model_;
};

/// Exact fields of the manufactured solution of a scenario (isotropic only).
ExactFields manufactured_fields(const Scenario &s);

struct LevelResult {
  std::string mesh;
  double h = 0.0;
  int dofs = 0;
  double residual = 0.0;
  ErrorNorms errors;
};

struct ConvergenceTable {
  std::vector<LevelResult> levels;
  std::vector<double> slopes; // log-log slope of the total error between consecutive levels
  bool monotone() const;
  double min_slope() const;
};

LevelResult manufactured_level(const Scenario &s, const ScenarioModel &m);
ConvergenceTable manufactured_convergence(const Scenario &s);
ConvergenceTable make_table(std::vector<LevelResult> levels);

/// Scattering of the scenario's incident field; returns the coefficient
/// vector and its residual.
CVector scatter(const Scenario &s, const ScenarioModel &m, double *residual = nullptr);

EnergyReport energy_report(const Scenario &s, const ScenarioModel &m);

/// ||delta(u, H)|| / ||delta(f1, f2)|| for a fixed smooth data perturbation.
double stability_ratio(const ScenarioModel &m);

struct FarFieldCheck {
  double max_tangential = 0.0; // max |xhat . E_inf| / |E_inf|
  double max_relation = 0.0;   // max |H_inf - xhat x E_inf| / |E_inf|
  double error = 0.0;          // max |E_inf - E_ref| / max |E_ref|
};

/// Exact fields of a dipole inside the body used as scattered data on S_R.
FarFieldCheck far_field_oracle(const TetMesh &mesh, double kappa, const ElectricDipole &dip,
                               int order = 2);

/// Observation directions: nodes of the product sphere rule with n polar nodes.
std::vector<Vec3> direction_grid(int n);

std::vector<ReciprocityCase> reciprocity_cases(const Scenario &s, const ScenarioModel &m);

/// Probe report for the scenario (q from the config, or nu(z_*)).
ProbeDataReport probe_report(const Scenario &s, const TetMesh &probe_mesh, bool q_normal);

struct IndicatorRay {
  IndicatorMap map;
  std::vector<double> distance; // to the interface
  bool monotone = false;        // decreasing away from the body
  double near_far = 0.0;        // I(near_distance) / I(far_distance)
};

IndicatorRay indicator_ray(const Scenario &s, const ScenarioModel &m);

} // namespace emel
