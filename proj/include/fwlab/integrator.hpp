#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>

#include "fwlab/field.hpp"
#include "fwlab/nonlinearity.hpp"

namespace fwlab {

/// The pair xi = (u, du/dt) at one time instant.
struct SimState {
  double t = 0.0;
  SpectralField u;
  SpectralField v;

  SimState() = default;
  SimState(double time, SpectralField uu, SpectralField vv)
      : t(time), u(std::move(uu)), v(std::move(vv)) {}
  explicit SimState(const Grid& g) : u(g), v(g) {}
};

/// Full problem instance: du/dtt + gamma (-Delta)^theta du/dt - Delta u
/// + f(u) = g. An absent nonlinearity means f = 0 (the linear equation).
struct ModelParams {
  double gamma = 1.0;
  double theta = 0.5;
  std::optional<NonlinearitySpec> nonlinearity;
  SpectralField forcing;  // time-independent g, band-limited to the grid
};

enum class Dealias { TwoThirds, ZeroPadTriple, None };

struct IntegratorConfig {
  double dt = 1e-2;
  Dealias dealias = Dealias::ZeroPadTriple;
  double t_end = 1.0;
  int snapshot_stride = 10;
  bool progress = false;  // one line per snapshot on stderr
};

/// Raised when a coefficient magnitude crosses the blow-up bound; carries
/// the last finite state so callers can checkpoint it.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(std::string what, SimState last)
      : std::runtime_error(std::move(what)), last_finite(std::move(last)) {}
  SimState last_finite;
};

/// Exact propagator of one damped mode over dt: the matrix exponential of
/// dt * [[0, 1], [-mu, -gamma mu^theta]] in closed form, with the
/// degenerate (repeated-root) branch handled by its series. The damping
/// multiplier uses 0^0 = 1, so theta = 0 damps the mean mode as the
/// identity operator does.
Eigen::Matrix2d linear_propagator(double mu, double gamma, double theta,
                                  double dt);

/// One Strang step L(dt/2) N(dt) L(dt/2); the kick updates v by
/// dt*(g - f(u)) with u frozen, dealiased per config.
SimState step(const SimState& state, const ModelParams& params,
              const IntegratorConfig& cfg);

using SnapshotSink = std::function<void(const SimState&)>;

/// Advance to t_end, invoking each sink at t=0, every snapshot_stride
/// steps, and at the final step. Deterministic for identical inputs.
/// Throws BlowupError with the last finite state on blow-up.
SimState run(const SimState& initial, const ModelParams& params,
             const IntegratorConfig& cfg,
             const std::vector<SnapshotSink>& sinks = {});

/// Default stability bound for the explicit kick:
/// 0.5 / (1 + sup |f'(u0)|), the sup estimated on collocation samples.
double dt_stability_bound(const SimState& initial, const ModelParams& params);

/// Reusable stepper: caches the per-mode propagator table and the
/// dealiasing workspace across steps.
class Stepper {
 public:
  Stepper(const Grid& grid, const ModelParams& params,
          const IntegratorConfig& cfg);

  void advance(SimState& state) const;  // one step in place

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  ModelParams params_;
  IntegratorConfig cfg_;
  // Propagator entries for the half step, laid out per mode.
  Eigen::ArrayXd a11_, a12_, a21_, a22_;
  int pad_ = 0;       // refined grid size for the nonlinear term
  int keep_band_ = 0; // two-thirds truncation bound, 0 = keep all

  void half_linear(SimState& state) const;
  void kick(SimState& state) const;
};

}  // namespace fwlab
