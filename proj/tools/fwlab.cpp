// fwlab command-line driver: simulate, analyze-linear, verify-identities,
// calibrate-fractional, experiment, checkpoint-info.
//
// Exit codes: 0 success / PASS, 1 FAIL verdict, 2 usage or config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fwlab/checkpoint.hpp"
#include "fwlab/config.hpp"
#include "fwlab/diagnostics.hpp"
#include "fwlab/fractional.hpp"
#include "fwlab/linear_analysis.hpp"
#include "fwlab/reports.hpp"
#include "fwlab/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << text;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  fwlab::RunConfig cfg = fwlab::load_config(config_path);
  const fs::path dir = out_dir.empty() ? cfg.output_directory : out_dir;
  fs::create_directories(dir);

  const fwlab::ModelParams params = cfg.model_params();
  fwlab::SimState initial(cfg.grid);
  if (cfg.initial.kind == fwlab::InitialSpec::Kind::Seeded) {
    initial = fwlab::random_energy_state(
        cfg.grid, cfg.initial.seed, cfg.initial.band, cfg.initial.amplitude,
        params.nonlinearity ? params.nonlinearity->growth_q : 0.0);
  } else if (cfg.initial.kind == fwlab::InitialSpec::Kind::Checkpoint) {
    auto contents = fwlab::read_checkpoint(cfg.initial.checkpoint_path);
    if (contents.state.u.grid != cfg.grid)
      throw std::invalid_argument(
          "simulate: checkpoint grid does not match the config grid");
    initial = std::move(contents.state);
  }

  fwlab::DiagnosticsCollector collector(params);
  fwlab::IntegratorConfig icfg = cfg.integrator_config();
  icfg.progress = true;

  fwlab::SimState final_state(cfg.grid);
  try {
    final_state = fwlab::run(initial, params, icfg, {collector.sink()});
  } catch (const fwlab::BlowupError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    fwlab::write_checkpoint(e.last_finite, params,
                            (dir / "blowup.ckpt").string());
    std::ofstream os(dir / "diagnostics.csv");
    fwlab::records_to_csv(collector.records(), os);
    return kExitFail;
  }

  {
    std::ofstream os(dir / "diagnostics.csv");
    fwlab::records_to_csv(collector.records(), os);
  }
  {
    std::vector<fwlab::WindowNorm> windows;
    for (auto kind : {fwlab::WindowKind::L2_H32, fwlab::WindowKind::L4_L12,
                      fwlab::WindowKind::L2_damping}) {
      const auto w = fwlab::sliding_window_norms(collector.records(), kind);
      windows.insert(windows.end(), w.begin(), w.end());
    }
    std::ofstream os(dir / "windows.csv");
    fwlab::window_norms_to_csv(windows, os);
  }
  fwlab::write_checkpoint(final_state, params, (dir / "final.ckpt").string());
  std::cout << "simulate: reached t = " << final_state.t << ", outputs in "
            << dir.string() << "\n";
  return kExitPass;
}

int cmd_analyze_linear(double gamma, double theta, double mu_max, int count,
                       const std::string& out_dir) {
  const auto portrait = fwlab::spectrum_portrait(gamma, theta, mu_max, count);
  const auto regime = fwlab::classify_regime(gamma, theta, mu_max);

  fs::create_directories(out_dir);
  std::ostringstream csv;
  csv << "mu,re_plus,im_plus,re_minus,im_minus\n";
  csv.precision(17);
  for (const auto& p : portrait)
    csv << p.mu << ',' << p.lambda_plus.real() << ',' << p.lambda_plus.imag()
        << ',' << p.lambda_minus.real() << ',' << p.lambda_minus.imag()
        << '\n';
  write_text(fs::path(out_dir) / "portrait.csv", csv.str());

  const json j = fwlab::to_json(regime);
  write_text(fs::path(out_dir) / "regime.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_verify_identities(const std::string& config_path,
                          const std::string& out_dir) {
  fwlab::RunConfig cfg = fwlab::load_config(config_path);
  const fs::path dir = out_dir.empty() ? cfg.output_directory : out_dir;
  fs::create_directories(dir);

  const fwlab::ModelParams params = cfg.model_params();
  const fwlab::SimState initial = fwlab::random_energy_state(
      cfg.grid, 1, 4, 1.0,
      params.nonlinearity ? params.nonlinearity->growth_q : 0.0);

  json report;
  double ratio = 0.0;
  double res[2] = {0.0, 0.0};
  double lyap[2] = {0.0, 0.0};
  for (int pass = 0; pass < 2; ++pass) {
    fwlab::IntegratorConfig icfg = cfg.integrator_config();
    if (pass == 1) {
      icfg.dt /= 2.0;
      icfg.snapshot_stride *= 2;
    }
    fwlab::DiagnosticsCollector collector(params);
    fwlab::run(initial, params, icfg, {collector.sink()});
    res[pass] =
        fwlab::energy_identity_residual_per_unit_time(collector.records());
    if (params.theta == 0.5)
      lyap[pass] = fwlab::lyapunov_identity_residual_per_unit_time(
          collector.lyapunov_samples());
  }
  ratio = res[1] > 0.0 ? res[0] / res[1] : 0.0;

  report["energy_identity_residual_per_unit_time"] = {{"dt", res[0]},
                                                      {"dt_half", res[1]}};
  report["residual_ratio"] = ratio;
  if (params.theta == 0.5)
    report["lyapunov_residual_per_unit_time"] = {{"dt", lyap[0]},
                                                 {"dt_half", lyap[1]}};
  // Second-order convergence shows as a ratio near 4; accept a wide band.
  const bool ok = res[0] < 1e-12 || (ratio > 2.5 && ratio < 6.5);
  report["verdict"] = ok ? "PASS" : "FAIL";
  write_text(dir / "identities.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return ok ? kExitPass : kExitFail;
}

int cmd_calibrate_fractional(double s, double h_min, double h_max, int shells,
                             int directions, int n, const std::string& out_dir) {
  fwlab::IntegralQuadratureSpec q{h_min, h_max, shells, directions};
  const fwlab::FractionalExponent fs_(s);
  const double c = fwlab::calibrate_constant(fs_, q);

  // Cross-validate on an independent two-mode field.
  const fwlab::Grid grid = fwlab::make_grid(3, n, fwlab::Basis::TorusExponential);
  const fwlab::Field test =
      fwlab::sample_field(grid, [](double x, double y, double) {
        return std::cos(x) + std::cos(2.0 * y);
      });
  const fwlab::SpectralField tc = fwlab::forward_transform(test);
  const double spectral = fwlab::bilinear_form_spectral(tc, tc, fs_);
  const double integral = fwlab::bilinear_form_integral(tc, tc, fs_, q, c);
  const double rel = std::abs(integral - spectral) / std::abs(spectral);

  json j{{"s", s},
         {"c", c},
         {"quadrature",
          {{"h_min", h_min}, {"h_max", h_max}, {"shells", shells},
           {"directions", directions}}},
         {"crosscheck",
          {{"spectral", spectral}, {"integral", integral},
           {"relative_error", rel}}}};
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "calibration.json", j.dump(2) + "\n");
  }
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir) {
  fwlab::RunConfig cfg = fwlab::load_config(config_path);
  if (!cfg.experiment)
    throw fwlab::ConfigError({"experiment: config has no [experiment] section"});
  const fwlab::ExperimentSpec& spec = *cfg.experiment;
  const fs::path dir = out_dir.empty() ? cfg.output_directory : out_dir;
  fs::create_directories(dir);

  json report;
  fwlab::Verdict verdict = fwlab::Verdict::Fail;
  std::vector<fwlab::TrajectoryRun> trajectories;

  switch (spec.kind) {
    case fwlab::ExperimentKind::Dissipativity: {
      const auto rep = fwlab::dissipativity_sweep(spec);
      report = fwlab::to_json(rep);
      verdict = rep.verdict;
      trajectories = rep.trajectories;
      break;
    }
    case fwlab::ExperimentKind::GalerkinConvergence: {
      const auto rep = fwlab::galerkin_convergence(spec, spec.resolutions);
      report = fwlab::to_json(rep);
      verdict = rep.verdict;
      break;
    }
    case fwlab::ExperimentKind::AttractorRegularity: {
      const auto rep = fwlab::attractor_regularity_probe(spec);
      report = fwlab::to_json(rep);
      verdict = rep.verdict;
      break;
    }
    case fwlab::ExperimentKind::StrichartzProbe: {
      const auto rep = fwlab::strichartz_probe(spec);
      report = fwlab::to_json(rep);
      verdict = rep.verdict;
      trajectories = rep.trajectories;
      break;
    }
    case fwlab::ExperimentKind::SeparationProbe: {
      const auto rep = fwlab::separation_probe(spec, spec.delta0);
      report = fwlab::to_json(rep);
      verdict = rep.verdict;
      break;
    }
  }

  report["spec"] = fwlab::to_json(spec);
  write_text(dir / "report.json", report.dump(2) + "\n");
  for (const auto& t : trajectories) {
    std::ostringstream name;
    name << "trajectory_seed" << t.seed << "_amp" << t.amplitude << ".csv";
    std::ofstream os(dir / name.str());
    fwlab::records_to_csv(t.records, os);
  }
  std::cout << "experiment " << fwlab::to_string(spec.kind) << ": "
            << fwlab::to_string(verdict) << " (report in "
            << (dir / "report.json").string() << ")\n";
  return verdict == fwlab::Verdict::Fail ? kExitFail : kExitPass;
}

int cmd_checkpoint_info(const std::string& path) {
  const auto info = fwlab::checkpoint_info(path);
  const auto contents = fwlab::read_checkpoint(path);
  json j{{"version", info.version},
         {"dim", info.dim},
         {"n_per_axis", info.n_per_axis},
         {"basis", info.basis == fwlab::Basis::TorusExponential ? "torus"
                                                                : "dirichlet"},
         {"gamma", info.gamma},
         {"theta", info.theta},
         {"t", info.t},
         {"u_l2", fwlab::l2_norm(contents.state.u)},
         {"v_l2", fwlab::l2_norm(contents.state.v)}};
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fwlab: spectral simulator and verification lab for the "
               "fractionally damped semilinear wave equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, ckpt_path;
  double gamma = 1.0, theta = 0.5, mu_max = 1e6;
  int count = 400;
  double s = 0.5, h_min = 1e-3, h_max = 32.0;
  int shells = 64, directions = 26, n = 16;

  auto* sim = app.add_subcommand("simulate", "run a simulation from a config");
  sim->add_option("--config", config_path, "config file")->required();
  sim->add_option("--output", out_dir, "output directory override");

  auto* lin = app.add_subcommand("analyze-linear",
                                 "per-mode spectrum portrait and regime");
  lin->add_option("--gamma", gamma, "damping coefficient")->required();
  lin->add_option("--theta", theta, "damping exponent")->required();
  lin->add_option("--mu-max", mu_max, "largest mu in the sweep");
  lin->add_option("--count", count, "number of mu samples");
  lin->add_option("--output", out_dir, "output directory")
      ->default_val("out");

  auto* ver = app.add_subcommand("verify-identities",
                                 "energy/Lyapunov identity residuals at dt "
                                 "and dt/2");
  ver->add_option("--config", config_path, "config file")->required();
  ver->add_option("--output", out_dir, "output directory override");

  auto* cal = app.add_subcommand("calibrate-fractional",
                                 "calibrate the singular-integral constant");
  cal->add_option("--s", s, "fractional exponent in (0,1)")->required();
  cal->add_option("--h-min", h_min, "inner cutoff");
  cal->add_option("--h-max", h_max, "outer cutoff");
  cal->add_option("--shells", shells, "radial shells");
  cal->add_option("--directions", directions, "angular directions");
  cal->add_option("--n", n, "cross-check grid resolution");
  cal->add_option("--output", out_dir, "output directory");

  auto* exp = app.add_subcommand("experiment", "run a configured experiment");
  exp->add_option("--config", config_path, "config file")->required();
  exp->add_option("--output", out_dir, "output directory override");

  auto* nfo = app.add_subcommand("checkpoint-info", "describe a checkpoint");
  nfo->add_option("path", ckpt_path, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (lin->parsed())
      return cmd_analyze_linear(gamma, theta, mu_max, count, out_dir);
    if (ver->parsed()) return cmd_verify_identities(config_path, out_dir);
    if (cal->parsed())
      return cmd_calibrate_fractional(s, h_min, h_max, shells, directions, n,
                                      out_dir);
    if (exp->parsed()) return cmd_experiment(config_path, out_dir);
    if (nfo->parsed()) return cmd_checkpoint_info(ckpt_path);
  } catch (const fwlab::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
