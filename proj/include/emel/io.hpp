#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "emel/experiments.hpp"

namespace emel {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path &path);

/// Legacy ASCII VTK unstructured grid: u as point data (zero outside the
/// body), H and E as vertex averages over shell tets, region as cell data.
/// Complex fields are split into _re/_im arrays.
void write_vtk(const std::filesystem::path &path, const TetMesh &mesh, const CoupledSystem &sys,
               const CVector &x, double kappa);

void write_far_field_csv(const std::filesystem::path &path, const FarFieldPattern &ff);
void write_reciprocity_csv(const std::filesystem::path &path,
                           const std::vector<ReciprocityCase> &cases);
void write_probe_csv(const std::filesystem::path &path, const ProbeDataReport &rep);
void write_indicator_csv(const std::filesystem::path &path, const IndicatorMap &map);
void write_convergence_csv(const std::filesystem::path &path, const ConvergenceTable &t);

/// Collects inputs and outputs of one run and writes manifest.json next to
/// the outputs. Contains no timestamps, so identical runs give identical
/// manifests.
class Manifest {
public:
  Manifest(std::string subcommand, int threads);
  void input(const std::filesystem::path &p);
  void output(const std::filesystem::path &p);
  void value(const std::string &key, const std::string &v);
  void status(bool passed) { passed_ = passed; }
  void write(const std::filesystem::path &dir) const;

private:
  std::string subcommand_;
  int threads_;
  bool passed_ = true;
  std::vector<std::filesystem::path> inputs_, outputs_;
  std::map<std::string, std::string> values_;
};

inline constexpr const char *kVersion = "1.0.0";

} // namespace emel
