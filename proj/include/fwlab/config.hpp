#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "fwlab/experiments.hpp"

namespace fwlab {

/// Parse failure: every violated rule, with its key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Initial state: zero, a seeded random energy-space state, or a resume
/// from a checkpoint file.
struct InitialSpec {
  enum class Kind { Zero, Seeded, Checkpoint };
  Kind kind = Kind::Seeded;
  std::uint64_t seed = 1;
  int band = 4;
  double amplitude = 1.0;
  std::string checkpoint_path;
};

/// Fully validated run description (grid + model + integrator, plus the
/// optional experiment section).
struct RunConfig {
  Grid grid;
  ProblemSpec problem;
  double dt = 1e-2;
  Dealias dealias = Dealias::ZeroPadTriple;
  double t_end = 1.0;
  int snapshot_stride = 10;

  InitialSpec initial;
  std::optional<ExperimentSpec> experiment;

  std::string output_directory = "out";

  ModelParams model_params() const { return problem.realize(grid); }
  IntegratorConfig integrator_config() const;
};

/// Parse the INI-style config document. Unknown keys are errors (strict
/// mode); all violations are collected and reported together.
RunConfig parse_config(std::istream& in);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace fwlab
