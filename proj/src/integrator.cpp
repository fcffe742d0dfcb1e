#include "fwlab/integrator.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "fwlab/transforms.hpp"

namespace fwlab {

namespace {

constexpr double kBlowupBound = 1e30;

double damping_multiplier(double mu, double theta) {
  if (mu == 0.0) return theta == 0.0 ? 1.0 : 0.0;
  return std::pow(mu, theta);
}

bool state_finite(const SimState& s) {
  return s.u.coeffs.abs().maxCoeff() < kBlowupBound &&
         s.v.coeffs.abs().maxCoeff() < kBlowupBound &&
         s.u.coeffs.isFinite().all() && s.v.coeffs.isFinite().all();
}

}  // namespace

Eigen::Matrix2d linear_propagator(double mu, double gamma, double theta,
                                  double dt) {
  if (mu < 0.0 || gamma < 0.0 || theta < 0.0 || theta > 1.0 || !(dt > 0.0))
    throw std::invalid_argument("linear_propagator: invalid arguments");

  const double b = gamma * damping_multiplier(mu, theta);
  // Solution of w'' + b w' + mu w = 0:
  //   w(t) = e^{-bt/2} [ C(t) w0 + S(t) (w0' + (b/2) w0) ],
  // with C = cosh(z t), S = sinh(z t)/z and z^2 = b^2/4 - mu. Everything
  // is evaluated through e^{lambda t} to avoid overflow, and a series
  // covers the near-degenerate z -> 0 regime.
  const double disc4 = 0.25 * b * b - mu;  // z^2, either sign
  double c, sig;                            // e^{-bt/2} C, e^{-bt/2} S
  const double zt2 = disc4 * dt * dt;
  if (std::abs(zt2) < 1e-8) {
    const double e = std::exp(-0.5 * b * dt);
    c = e * (1.0 + zt2 / 2.0 + zt2 * zt2 / 24.0);
    sig = e * dt * (1.0 + zt2 / 6.0 + zt2 * zt2 / 120.0);
  } else if (disc4 > 0.0) {
    const double z = std::sqrt(disc4);
    const double e1 = std::exp((-0.5 * b + z) * dt);
    const double e2 = std::exp((-0.5 * b - z) * dt);
    c = 0.5 * (e1 + e2);
    sig = 0.5 * (e1 - e2) / z;
  } else {
    const double w = std::sqrt(-disc4);
    const double e = std::exp(-0.5 * b * dt);
    c = e * std::cos(w * dt);
    sig = e * std::sin(w * dt) / w;
  }

  Eigen::Matrix2d m;
  m(0, 0) = c + 0.5 * b * sig;
  m(0, 1) = sig;
  m(1, 0) = -mu * sig;
  m(1, 1) = c - 0.5 * b * sig;
  return m;
}

Stepper::Stepper(const Grid& grid, const ModelParams& params,
                 const IntegratorConfig& cfg)
    : grid_(grid), params_(params), cfg_(cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("Stepper: dt must be > 0");
  if (params.gamma < 0.0)
    throw std::invalid_argument("Stepper: gamma must be >= 0");
  if (params.theta < 0.0 || params.theta > 1.0)
    throw std::invalid_argument("Stepper: theta must lie in [0,1]");
  if (params.forcing.coeffs.size() != 0 && params.forcing.grid != grid)
    throw std::invalid_argument("Stepper: forcing grid mismatch");

  // theta > 0 leaves the mean mode undamped, so a mean in g would grow
  // linearly forever; reject it instead of guessing a function space.
  if (params.theta > 0.0 && params.forcing.coeffs.size() != 0) {
    const double g0 = std::abs(params.forcing.coeffs[0]);
    const double scale = std::max(1.0, params.forcing.coeffs.abs().maxCoeff());
    if (g0 > 1e-13 * scale)
      throw std::invalid_argument(
          "Stepper: theta > 0 requires mean-zero forcing");
  }

  const Eigen::Index count = grid.count();
  a11_.resize(count);
  a12_.resize(count);
  a21_.resize(count);
  a22_.resize(count);
  const double half = 0.5 * cfg.dt;
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::Matrix2d m =
        linear_propagator(grid.mu_flat(i), params.gamma, params.theta, half);
    a11_[i] = m(0, 0);
    a12_[i] = m(0, 1);
    a21_[i] = m(1, 0);
    a22_[i] = m(1, 1);
  }

  const int n = grid.n_per_axis();
  switch (cfg.dealias) {
    case Dealias::ZeroPadTriple:
      pad_ = 3 * n;
      keep_band_ = 0;
      break;
    case Dealias::TwoThirds:
      pad_ = n;
      keep_band_ = n / 3;
      break;
    case Dealias::None:
      pad_ = n;
      keep_band_ = 0;
      break;
  }
}

void Stepper::half_linear(SimState& s) const {
  auto& u = s.u.coeffs;
  auto& v = s.v.coeffs;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const std::complex<double> ui = u[i], vi = v[i];
    u[i] = a11_[i] * ui + a12_[i] * vi;
    v[i] = a21_[i] * ui + a22_[i] * vi;
  }
}

void Stepper::kick(SimState& s) const {
  const bool forced = params_.forcing.coeffs.size() != 0;
  if (!params_.nonlinearity) {
    if (forced) s.v.coeffs += cfg_.dt * params_.forcing.coeffs;
    return;
  }
  const NonlinearitySpec& f = *params_.nonlinearity;
  SpectralField w =
      apply_pointwise_dealiased(s.u, pad_, [&](double x) { return f.f(x); });
  if (keep_band_ > 0) {
    for (Eigen::Index i = 0; i < w.coeffs.size(); ++i) {
      const auto j = grid_.unflatten(i);
      for (int a = 0; a < grid_.dim(); ++a)
        if (std::abs(grid_.axis_wavenumber(j[a])) > keep_band_) {
          w.coeffs[i] = 0.0;
          break;
        }
    }
  }
  if (forced)
    s.v.coeffs += cfg_.dt * (params_.forcing.coeffs - w.coeffs);
  else
    s.v.coeffs -= cfg_.dt * w.coeffs;
}

void Stepper::advance(SimState& s) const {
  half_linear(s);
  kick(s);
  half_linear(s);
  s.t += cfg_.dt;
}

SimState step(const SimState& state, const ModelParams& params,
              const IntegratorConfig& cfg) {
  Stepper st(state.u.grid, params, cfg);
  SimState out = state;
  st.advance(out);
  if (!state_finite(out))
    throw BlowupError("step: coefficient magnitude crossed 1e30 at t = " +
                          std::to_string(out.t),
                      state);
  return out;
}

double dt_stability_bound(const SimState& initial, const ModelParams& params) {
  if (!params.nonlinearity) return 0.5;
  const Field u0 = inverse_transform(initial.u);
  double sup = 0.0;
  for (Eigen::Index i = 0; i < u0.values.size(); ++i)
    sup = std::max(sup, std::abs(params.nonlinearity->f_prime(u0.values[i])));
  return 0.5 / (1.0 + sup);
}

SimState run(const SimState& initial, const ModelParams& params,
             const IntegratorConfig& cfg,
             const std::vector<SnapshotSink>& sinks) {
  if (cfg.t_end < 0.0)
    throw std::invalid_argument("run: t_end must be >= 0");
  if (cfg.snapshot_stride < 1)
    throw std::invalid_argument("run: snapshot_stride must be >= 1");
  const double bound = dt_stability_bound(initial, params);
  if (cfg.dt > bound)
    throw std::invalid_argument(
        "run: dt = " + std::to_string(cfg.dt) +
        " exceeds the stability bound " + std::to_string(bound));

  SimState state = initial;
  const auto emit = [&](const SimState& s) {
    for (const auto& sink : sinks) sink(s);
    if (cfg.progress)
      std::cerr << "t = " << s.t << "  max|u_k| = "
                << s.u.coeffs.abs().maxCoeff() << "\n";
  };

  const long steps = std::lround(cfg.t_end / cfg.dt);
  emit(state);
  if (steps == 0) return state;

  Stepper st(initial.u.grid, params, cfg);
  SimState last_finite = state;
  for (long k = 1; k <= steps; ++k) {
    st.advance(state);
    if (!state_finite(state))
      throw BlowupError(
          "run: blow-up detected at t = " + std::to_string(state.t),
          last_finite);
    if (k % cfg.snapshot_stride == 0 || k == steps) {
      emit(state);
      last_finite = state;
    }
  }
  return state;
}

}  // namespace fwlab
