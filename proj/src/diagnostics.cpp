#include "fwlab/diagnostics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fwlab/fractional.hpp"
#include "fwlab/transforms.hpp"

namespace fwlab {

namespace {

void check_equal_spacing(const std::vector<double>& t) {
  if (t.size() < 2) return;
  const double dt = t[1] - t[0];
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    if (std::abs((t[i + 1] - t[i]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("diagnostics: irregular snapshot spacing");
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y,
                 std::size_t first, std::size_t last) {
  double acc = 0.0;
  for (std::size_t i = first; i < last; ++i)
    acc += 0.5 * (y[i] + y[i + 1]) * (t[i + 1] - t[i]);
  return acc;
}

// Composite Simpson on a uniform grid (3/8 rule absorbs an odd leftover).
// Used where the quadrature error must stay far below the integrator
// error, e.g. the Lyapunov flux integral.
double simpson_uniform(const std::vector<double>& y, double h) {
  const std::size_t n = y.size() - 1;
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * h * (y[0] + y[1]);
  double acc = 0.0;
  std::size_t i = 0;
  if (n % 2 == 1) {
    if (n < 3) return 0.5 * h * (y[0] + y[1]);
    acc += 3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3]);
    i = 3;
  }
  for (; i + 2 <= n; i += 2)
    acc += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  return acc;
}

}  // namespace

double sobolev_norm(const SpectralField& u, double s) {
  if (s < 0.0 || s > 3.0)
    throw std::invalid_argument("sobolev_norm: s must lie in [0,3]");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.grid.count(); ++i)
    acc += std::pow(1.0 + u.grid.mu_flat(i), s) * std::norm(u.coeffs[i]);
  return std::sqrt(u.grid.mode_weight() * acc);
}

double lp_norm_refined(const SpectralField& u, double p, int refine_factor) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_refined: p >= 1");
  const int m = refine_factor * u.grid.n_per_axis();
  const double integral = integrate_pointwise_refined(
      u, m, [p](double x) { return std::pow(std::abs(x), p); });
  return std::pow(integral, 1.0 / p);
}

double damping_integrand(const SimState& state, const ModelParams& params) {
  // gamma ||(-Delta)^{theta/2} v||^2 = gamma sum mu^theta |v_k|^2 vol,
  // with the integrator's 0^0 = 1 convention at the mean mode.
  const Grid& g = state.v.grid;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < g.count(); ++i) {
    const double mu = g.mu_flat(i);
    const double mult =
        mu == 0.0 ? (params.theta == 0.0 ? 1.0 : 0.0) : std::pow(mu, params.theta);
    acc += mult * std::norm(state.v.coeffs[i]);
  }
  return params.gamma * g.mode_weight() * acc;
}

double energy(const SimState& state, const ModelParams& params) {
  const Grid& g = state.u.grid;
  const double kinetic = 0.5 * g.mode_weight() * state.v.coeffs.abs2().sum();
  double grad = 0.0;
  for (Eigen::Index i = 0; i < g.count(); ++i)
    grad += g.mu_flat(i) * std::norm(state.u.coeffs[i]);
  grad *= 0.5 * g.mode_weight();

  double potential = 0.0;
  if (params.nonlinearity) {
    const NonlinearitySpec& f = *params.nonlinearity;
    potential = integrate_pointwise_refined(
        state.u, 3 * g.n_per_axis(),
        [&](double x) { return f.potential(x); });
  }
  double forcing = 0.0;
  if (params.forcing.coeffs.size() != 0)
    forcing = inner_product(params.forcing, state.u);
  return kinetic + grad + potential - forcing;
}

double energy_space_norm(const SimState& state, double q) {
  if (q < 0.0) throw std::invalid_argument("energy_space_norm: q >= 0");
  const double h1 = sobolev_norm(state.u, 1.0);
  const double lq2 =
      lp_norm_refined(state.u, q + 2.0, 3);
  const double vl2 = l2_norm(state.v);
  return h1 + lq2 + vl2;
}

double lyapunov_quantity(const SimState& state, const ModelParams& params) {
  const FractionalExponent half(0.5);
  const double pairing = bilinear_form_spectral(state.v, state.u, half);
  // ||(-Delta)^{1/2} u||^2 = sum mu |u_k|^2 vol.
  double hdot = 0.0;
  for (Eigen::Index i = 0; i < state.u.grid.count(); ++i)
    hdot += state.u.grid.mu_flat(i) * std::norm(state.u.coeffs[i]);
  hdot *= state.u.grid.mode_weight();
  return pairing + 0.5 * params.gamma * hdot;
}

double lyapunov_flux(const SimState& state, const ModelParams& params) {
  const Grid& g = state.u.grid;
  const FractionalExponent half(0.5);

  double h34 = 0.0, v14 = 0.0;
  for (Eigen::Index i = 0; i < g.count(); ++i) {
    const double mu = g.mu_flat(i);
    h34 += std::pow(mu, 1.5) * std::norm(state.u.coeffs[i]);
    v14 += std::sqrt(mu) * std::norm(state.v.coeffs[i]);
  }
  h34 *= g.mode_weight();
  v14 *= g.mode_weight();

  double fterm = 0.0;
  if (params.nonlinearity) {
    const NonlinearitySpec& f = *params.nonlinearity;
    const SpectralField fu = apply_pointwise_dealiased(
        state.u, 3 * g.n_per_axis(), [&](double x) { return f.f(x); });
    fterm = bilinear_form_spectral(fu, state.u, half);
  }
  double gterm = 0.0;
  if (params.forcing.coeffs.size() != 0)
    gterm = bilinear_form_spectral(params.forcing, state.u, half);

  return h34 + fterm - gterm - v14;
}

DiagnosticsRecord compute_record(const SimState& state,
                                 const ModelParams& params) {
  DiagnosticsRecord r;
  r.t = state.t;
  r.energy_E = energy(state, params);
  const double q = params.nonlinearity ? params.nonlinearity->growth_q : 0.0;
  r.energy_space_norm = energy_space_norm(state, q);
  r.h1 = sobolev_norm(state.u, 1.0);
  r.h32 = sobolev_norm(state.u, 1.5);
  r.h2 = sobolev_norm(state.u, 2.0);
  r.damping_integrand = damping_integrand(state, params);
  r.l12_norm = lp_norm_refined(state.u, 12.0, 2);
  r.lyapunov_quantity =
      params.theta == 0.5 ? lyapunov_quantity(state, params) : 0.0;
  return r;
}

std::vector<double> energy_identity_residuals(
    const std::vector<DiagnosticsRecord>& records) {
  std::vector<double> t(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) t[i] = records[i].t;
  check_equal_spacing(t);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double dt = records[i + 1].t - records[i].t;
    const double dissipated =
        0.5 * (records[i].damping_integrand + records[i + 1].damping_integrand) *
        dt;
    out.push_back(std::abs(records[i + 1].energy_E - records[i].energy_E +
                           dissipated));
  }
  return out;
}

double energy_identity_residual_per_unit_time(
    const std::vector<DiagnosticsRecord>& records) {
  if (records.size() < 2)
    throw std::invalid_argument("energy_identity_residual: need >= 2 records");
  const auto res = energy_identity_residuals(records);
  double sum = 0.0;
  for (double r : res) sum += r;
  return sum / (records.back().t - records.front().t);
}

namespace {

WindowNorm window_norm_impl(const std::vector<DiagnosticsRecord>& records,
                            std::size_t first, std::size_t last,
                            WindowKind kind) {
  if (last >= records.size() || first >= last)
    throw std::invalid_argument("window norm: bad record range");
  if (last - first + 1 < 9)
    throw std::invalid_argument("window norm: need >= 9 snapshots");
  std::vector<double> t, y;
  for (std::size_t i = first; i <= last; ++i) {
    t.push_back(records[i].t);
    switch (kind) {
      case WindowKind::L2_H32:
        y.push_back(records[i].h32 * records[i].h32);
        break;
      case WindowKind::L4_L12:
        y.push_back(std::pow(records[i].l12_norm, 4.0));
        break;
      case WindowKind::L2_damping:
        y.push_back(records[i].damping_integrand);
        break;
    }
  }
  check_equal_spacing(t);
  const double integral = trapezoid(t, y, 0, y.size() - 1);
  WindowNorm w;
  w.t_start = records[first].t;
  w.t_end = records[last].t;
  w.kind = kind;
  switch (kind) {
    case WindowKind::L2_H32:
      w.value = std::sqrt(integral);
      break;
    case WindowKind::L4_L12:
      w.value = std::pow(integral, 0.25);
      break;
    case WindowKind::L2_damping:
      w.value = integral;
      break;
  }
  return w;
}

}  // namespace

WindowNorm strichartz_window_norm(const std::vector<DiagnosticsRecord>& records,
                                  std::size_t first, std::size_t last) {
  return window_norm_impl(records, first, last, WindowKind::L4_L12);
}

WindowNorm h32_window_norm(const std::vector<DiagnosticsRecord>& records,
                           std::size_t first, std::size_t last) {
  return window_norm_impl(records, first, last, WindowKind::L2_H32);
}

std::vector<WindowNorm> sliding_window_norms(
    const std::vector<DiagnosticsRecord>& records, WindowKind kind) {
  std::vector<WindowNorm> out;
  if (records.size() < 2) return out;
  const double spacing = records[1].t - records[0].t;
  if (!(spacing > 0.0)) return out;
  const auto per_window =
      static_cast<std::size_t>(std::lround(1.0 / spacing));
  if (per_window + 1 < 9) return out;
  for (std::size_t first = 0; first + per_window < records.size(); ++first)
    out.push_back(window_norm_impl(records, first, first + per_window, kind));
  return out;
}

double lyapunov_identity_residual_per_unit_time(
    const std::vector<LyapunovSample>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("lyapunov residual: need >= 2 samples");
  std::vector<double> t(samples.size()), flux(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    t[i] = samples[i].t;
    flux[i] = samples[i].flux;
  }
  check_equal_spacing(t);
  const double h = (t.back() - t.front()) / (t.size() - 1);
  const double integral = simpson_uniform(flux, h);
  const double residual =
      std::abs(samples.back().quantity - samples.front().quantity + integral);
  return residual / (t.back() - t.front());
}

SnapshotSink DiagnosticsCollector::sink() {
  return [this](const SimState& s) {
    records_.push_back(compute_record(s, params_));
    if (lyapunov_ && params_.theta == 0.5) {
      LyapunovSample ls;
      ls.t = s.t;
      ls.quantity = lyapunov_quantity(s, params_);
      ls.flux = lyapunov_flux(s, params_);
      lyapunov_samples_.push_back(ls);
    }
  };
}

void records_to_csv(const std::vector<DiagnosticsRecord>& records,
                    std::ostream& os) {
  os << "t,energy_E,energy_space_norm,h1,h32,h2,damping_integrand,l12,"
        "lyapunov_quantity\n";
  os.precision(17);
  for (const auto& r : records)
    os << r.t << ',' << r.energy_E << ',' << r.energy_space_norm << ','
       << r.h1 << ',' << r.h32 << ',' << r.h2 << ',' << r.damping_integrand
       << ',' << r.l12_norm << ',' << r.lyapunov_quantity << '\n';
}

void window_norms_to_csv(const std::vector<WindowNorm>& windows,
                         std::ostream& os) {
  os << "t_start,t_end,kind,value\n";
  os.precision(17);
  for (const auto& w : windows) {
    const char* kind = w.kind == WindowKind::L2_H32
                           ? "L2_H32"
                           : (w.kind == WindowKind::L4_L12 ? "L4_L12"
                                                           : "L2_damping");
    os << w.t_start << ',' << w.t_end << ',' << kind << ',' << w.value << '\n';
  }
}

}  // namespace fwlab
