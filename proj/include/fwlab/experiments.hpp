#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fwlab/diagnostics.hpp"
#include "fwlab/integrator.hpp"
#include "fwlab/random_fields.hpp"

namespace fwlab {

enum class ExperimentKind {
  Dissipativity,
  GalerkinConvergence,
  AttractorRegularity,
  StrichartzProbe,
  SeparationProbe,
};

enum class Verdict { Pass, Fail, Reported, Inconclusive };
const char* to_string(Verdict v);
const char* to_string(ExperimentKind k);

/// Grid-independent model description; the forcing is realized per grid
/// so the same spec can drive a resolution sweep.
struct ProblemSpec {
  double gamma = 1.0;
  double theta = 0.5;
  std::optional<NonlinearitySpec> nonlinearity = NonlinearitySpec::quintic();
  ForcingSpec forcing;

  ModelParams realize(const Grid& grid) const;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Dissipativity;
  ProblemSpec problem;
  Grid grid;
  double dt = 1e-2;
  Dealias dealias = Dealias::ZeroPadTriple;
  int snapshot_stride = 10;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<double> amplitudes = {1.0, 2.0, 4.0};
  double horizon = 50.0;
  int data_band = 4;

  std::vector<int> resolutions;  // GalerkinConvergence
  double delta0 = 1e-8;          // SeparationProbe

  void validate() const;
  IntegratorConfig integrator_config() const;
};

/// Initial-data ensemble member: band-limited random pair scaled to the
/// requested energy-space norm.
SimState random_energy_state(const Grid& grid, std::uint64_t seed, int band,
                             double amplitude, double q);

struct TrajectoryRun {
  std::uint64_t seed = 0;
  double amplitude = 0.0;
  bool blew_up = false;
  double blowup_time = 0.0;
  std::vector<DiagnosticsRecord> records;
};

struct DissipativityReport {
  Verdict verdict = Verdict::Fail;
  std::string detail;
  double alpha = 0.0;            // fitted decay rate of the transient
  double absorbing_level = 0.0;  // empirical Q(||g||) surrogate
  double tail_spread = 0.0;      // relative spread of tail levels
  std::vector<double> entered_ball_times;
  std::vector<TrajectoryRun> trajectories;
};

DissipativityReport dissipativity_sweep(const ExperimentSpec& spec);

struct GalerkinRow {
  int n_coarse = 0;
  int n_fine = 0;
  double l2_difference = 0.0;
  bool coarse_blowup = false;
};

struct GalerkinReport {
  Verdict verdict = Verdict::Fail;
  std::string detail;
  std::vector<GalerkinRow> rows;
};

GalerkinReport galerkin_convergence(const ExperimentSpec& spec,
                                    const std::vector<int>& resolutions);

struct AttractorSeedStat {
  std::uint64_t seed = 0;
  double tail_max = 0.0;   // max of ||u||_H2 + ||v||_H1 over the tail
  double tail_slope = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> t;
  std::vector<double> e1_norm;  // ||u||_H2 + ||v||_H1 history
};

struct AttractorProbeReport {
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
  std::vector<AttractorSeedStat> seeds;
};

/// Tail study of the E1-norm ||u||_H2 + ||v||_H1. `evidence` is a prior
/// dissipativity report for the same problem; without one the probe runs
/// its own sweep first (the stated precondition).
AttractorProbeReport attractor_regularity_probe(
    const ExperimentSpec& spec,
    const DissipativityReport* evidence = nullptr);

struct StrichartzReport {
  Verdict verdict = Verdict::Reported;
  std::string detail;
  double q = 0.0;
  double tail_spread = 0.0;
  std::vector<TrajectoryRun> trajectories;
  std::vector<std::vector<WindowNorm>> window_histories;
};

StrichartzReport strichartz_probe(const ExperimentSpec& spec);

struct SeparationReport {
  Verdict verdict = Verdict::Fail;
  std::string detail;
  double rate = 0.0;          // fitted exponential separation rate
  double rate_refined = 0.0;  // same at dt/2
  std::vector<double> t;
  std::vector<double> separation;  // ||xi1 - xi2||_E / delta0
};

SeparationReport separation_probe(const ExperimentSpec& spec, double delta0);

/// Least-squares line fit, for the tail-trend and rate estimates.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fwlab
