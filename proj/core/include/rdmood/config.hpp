#pragma once

// Flat key=value run configuration shared by the CLI tools. Unknown keys are
// rejected; unset keys get defaults reproducing the reference parameter table
// (jump coefficients per order and dimension, DeC stages from the order, DMP
// relaxation per smoothness-extrema variant).

#include <map>
#include <optional>
#include <string>

#include "rdmood/mood.hpp"
#include "rdmood/solver.hpp"

namespace rdmood {

struct RunConfig {
  std::string case_name = "sod";
  int order = 3;  // Bernstein degree k
  std::optional<int> subintervals;  // M; default k + 1
  std::optional<int> corrections;   // R; default k + 1
  double cfl = 0.1;
  std::optional<int> cells;  // per direction; default 100 (1D) / 24 (2D)
  std::string mesh_file;     // exclusive with cells
  SeVariant se = SeVariant::lse;
  std::optional<double> eps1, eps2;      // DMP relaxation; default (1e-3, 0)
  std::optional<double> theta1, theta2;  // default per order and dimension
  bool full_cascade = true;
  DetectionVariable variable = DetectionVariable::all;
  bool use_mood = true;
  std::string out_dir;
  int output_every = 0;  // 0: final snapshot only

  int resolved_cells(int dim) const { return cells.value_or(dim == 1 ? 100 : 24); }
  DecConfig dec_config() const;
  DetectorConfig detector_config() const;
  JumpParams jump_params(int dim) const;
  SolverOptions solver_options(int dim, double final_time) const;
};

/// Parses a key=value config file ('#' comments allowed). Empty path: defaults.
RunConfig parse_config_file(const std::string& path);

/// Applies one key=value assignment (used for both file lines and CLI
/// overrides); throws on unknown keys or invalid values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Effective-config echo; parse_config_file of the written file round-trips.
std::string config_to_string(const RunConfig& cfg);

}  // namespace rdmood
