#pragma once

#include <iosfwd>
#include <vector>

#include "fwlab/integrator.hpp"

namespace fwlab {

/// One timestamped row of norms, energies, and identity ingredients.
/// lyapunov_quantity is populated on theta = 1/2 runs and 0 otherwise.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy_E = 0.0;
  double energy_space_norm = 0.0;
  double h1 = 0.0;
  double h32 = 0.0;
  double h2 = 0.0;
  double damping_integrand = 0.0;  // gamma ||(-Delta)^{theta/2} v||^2
  double l12_norm = 0.0;
  double lyapunov_quantity = 0.0;
};

enum class WindowKind { L2_H32, L4_L12, L2_damping };

struct WindowNorm {
  double t_start = 0.0;
  double t_end = 0.0;
  double value = 0.0;
  WindowKind kind = WindowKind::L2_H32;
};

/// E(u,v) = 1/2 ||v||^2 + 1/2 ||grad u||^2 + (F(u),1) - (g,u), with the
/// potential integrated on a 3x refined grid.
double energy(const SimState& state, const ModelParams& params);

/// Inhomogeneous Sobolev norm (sum_k (1+|kappa|^2)^s |u_k|^2 vol)^{1/2};
/// s = 0 recovers the L2 norm.
double sobolev_norm(const SpectralField& u, double s);

/// ||u||_{H1} + ||u||_{L^{q+2}} + ||v||_{L2} (sum convention).
double energy_space_norm(const SimState& state, double q);

/// Spatial L^p norm by collocation quadrature on a refine_factor-times
/// refined grid.
double lp_norm_refined(const SpectralField& u, double p, int refine_factor);

/// gamma ||(-Delta)^{theta/2} v||^2, the dissipation integrand of the
/// energy identity.
double damping_integrand(const SimState& state, const ModelParams& params);

/// (v, (-Delta)^{1/2} u) + gamma/2 ||(-Delta)^{1/2} u||^2.
double lyapunov_quantity(const SimState& state, const ModelParams& params);

/// ||(-Delta)^{3/4}u||^2 + (f(u),(-Delta)^{1/2}u) - (g,(-Delta)^{1/2}u)
///  - ||(-Delta)^{1/4}v||^2: what the Lyapunov quantity's derivative must
/// balance on theta = 1/2 runs.
double lyapunov_flux(const SimState& state, const ModelParams& params);

DiagnosticsRecord compute_record(const SimState& state,
                                 const ModelParams& params);

/// |E(t2) - E(t1) + int damping| per snapshot interval, trapezoid on the
/// stored damping integrand. Throws on irregular spacing.
std::vector<double> energy_identity_residuals(
    const std::vector<DiagnosticsRecord>& records);

/// Same residuals summed and divided by the covered time.
double energy_identity_residual_per_unit_time(
    const std::vector<DiagnosticsRecord>& records);

/// Window norm over records covering [t_start, t_start + 1]; at least 9
/// snapshots required.
WindowNorm strichartz_window_norm(const std::vector<DiagnosticsRecord>& records,
                                  std::size_t first, std::size_t last);
WindowNorm h32_window_norm(const std::vector<DiagnosticsRecord>& records,
                           std::size_t first, std::size_t last);

/// All unit-length sliding windows over a record stream (one window per
/// snapshot start while a full window fits).
std::vector<WindowNorm> sliding_window_norms(
    const std::vector<DiagnosticsRecord>& records, WindowKind kind);

/// Per-snapshot samples for the theta = 1/2 Lyapunov identity.
struct LyapunovSample {
  double t = 0.0;
  double quantity = 0.0;
  double flux = 0.0;
};

/// Integrated residual of the Lyapunov identity per unit time over the
/// sampled span. Requires theta = 1/2 samples, equally spaced.
double lyapunov_identity_residual_per_unit_time(
    const std::vector<LyapunovSample>& samples);

/// Snapshot sink that accumulates records (and Lyapunov samples when
/// theta = 1/2).
class DiagnosticsCollector {
 public:
  explicit DiagnosticsCollector(ModelParams params, bool collect_lyapunov = true)
      : params_(std::move(params)), lyapunov_(collect_lyapunov) {}

  SnapshotSink sink();

  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  const std::vector<LyapunovSample>& lyapunov_samples() const {
    return lyapunov_samples_;
  }

 private:
  ModelParams params_;
  bool lyapunov_;
  std::vector<DiagnosticsRecord> records_;
  std::vector<LyapunovSample> lyapunov_samples_;
};

/// CSV emitters (schemas documented in the README).
void records_to_csv(const std::vector<DiagnosticsRecord>& records,
                    std::ostream& os);
void window_norms_to_csv(const std::vector<WindowNorm>& windows,
                         std::ostream& os);

}  // namespace fwlab
