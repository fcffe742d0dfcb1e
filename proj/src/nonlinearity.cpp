#include "fwlab/nonlinearity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fwlab/fractional.hpp"
#include "fwlab/transforms.hpp"

namespace fwlab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

NonlinearitySpec NonlinearitySpec::power_odd(double q, double a) {
  require(q >= 0.0, "NonlinearitySpec: growth_q must be >= 0");
  require(a > 0.0, "NonlinearitySpec: coeff_a must be positive");
  NonlinearitySpec s;
  s.kind = NonlinearityKind::PowerOdd;
  s.growth_q = q;
  s.coeff_a = a;
  return s;
}

NonlinearitySpec NonlinearitySpec::cubic(double a) {
  NonlinearitySpec s = power_odd(2.0, a);
  s.kind = NonlinearityKind::Cubic;
  return s;
}

NonlinearitySpec NonlinearitySpec::quintic(double a) {
  NonlinearitySpec s = power_odd(4.0, a);
  s.kind = NonlinearityKind::Quintic;
  return s;
}

NonlinearitySpec NonlinearitySpec::custom(Eigen::ArrayXd u, Eigen::ArrayXd f,
                                          double growth_q) {
  require(u.size() == f.size() && u.size() >= 4,
          "NonlinearitySpec::custom: need >= 4 samples");
  require(growth_q >= 0.0, "NonlinearitySpec: growth_q must be >= 0");
  for (Eigen::Index i = 1; i < u.size(); ++i)
    require(u[i] > u[i - 1],
            "NonlinearitySpec::custom: sample points must increase");
  require(u[0] <= 0.0 && u[u.size() - 1] >= 0.0,
          "NonlinearitySpec::custom: sample range must straddle 0");

  NonlinearitySpec s;
  s.kind = NonlinearityKind::Custom;
  s.growth_q = growth_q;
  s.coeff_a = 1.0;
  s.table_u = std::move(u);
  s.table_f = std::move(f);

  // Fritsch-Carlson slopes: start from secant averages, then limit so
  // each interval stays monotone where the data is.
  const Eigen::Index n = s.table_u.size();
  Eigen::ArrayXd d(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    d[i] = (s.table_f[i + 1] - s.table_f[i]) /
           (s.table_u[i + 1] - s.table_u[i]);
  s.slopes_.resize(n);
  s.slopes_[0] = d[0];
  s.slopes_[n - 1] = d[n - 2];
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    s.slopes_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      s.slopes_[i] = 0.0;
      s.slopes_[i + 1] = 0.0;
      continue;
    }
    const double alpha = s.slopes_[i] / d[i];
    const double beta = s.slopes_[i + 1] / d[i];
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      s.slopes_[i] = tau * alpha * d[i];
      s.slopes_[i + 1] = tau * beta * d[i];
    }
  }

  // Cumulative integral of the interpolant from table_u[0]; each Hermite
  // interval integrates to h*(f0+f1)/2 + h^2*(m0-m1)/12.
  s.cumint_.resize(n);
  s.cumint_[0] = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = s.table_u[i + 1] - s.table_u[i];
    s.cumint_[i + 1] = s.cumint_[i] +
                       h * 0.5 * (s.table_f[i] + s.table_f[i + 1]) +
                       h * h / 12.0 * (s.slopes_[i] - s.slopes_[i + 1]);
  }

  s.cumint_at_zero_ = 0.0;
  s.cumint_at_zero_ = s.potential(0.0);  // re-bases F so that F(0) = 0
  return s;
}

int NonlinearitySpec::locate(double u) const {
  const Eigen::Index n = table_u.size();
  if (u < table_u[0] || u > table_u[n - 1])
    throw std::domain_error("NonlinearitySpec: custom table evaluated at " +
                            std::to_string(u) + ", outside its range");
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (table_u[mid] <= u ? lo : hi) = mid;
  }
  return static_cast<int>(lo);
}

double NonlinearitySpec::f(double u) const {
  const double a = coeff_a;
  switch (kind) {
    case NonlinearityKind::Cubic:
      return a * u * u * u;
    case NonlinearityKind::Quintic:
      return a * u * u * u * u * u;
    case NonlinearityKind::PowerOdd:
      return a * u * std::pow(std::abs(u), growth_q);
    case NonlinearityKind::Custom: {
      const int i = locate(u);
      const double h = table_u[i + 1] - table_u[i];
      const double t = (u - table_u[i]) / h;
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * table_f[i] +
             (t3 - 2 * t2 + t) * h * slopes_[i] +
             (-2 * t3 + 3 * t2) * table_f[i + 1] +
             (t3 - t2) * h * slopes_[i + 1];
    }
  }
  return 0.0;
}

double NonlinearitySpec::f_prime(double u) const {
  const double a = coeff_a;
  switch (kind) {
    case NonlinearityKind::Cubic:
      return 3.0 * a * u * u;
    case NonlinearityKind::Quintic: {
      const double u2 = u * u;
      return 5.0 * a * u2 * u2;
    }
    case NonlinearityKind::PowerOdd:
      return a * (growth_q + 1.0) * std::pow(std::abs(u), growth_q);
    case NonlinearityKind::Custom: {
      const int i = locate(u);
      const double h = table_u[i + 1] - table_u[i];
      const double t = (u - table_u[i]) / h;
      const double t2 = t * t;
      return ((6 * t2 - 6 * t) * table_f[i] +
              (3 * t2 - 4 * t + 1) * h * slopes_[i] +
              (-6 * t2 + 6 * t) * table_f[i + 1] +
              (3 * t2 - 2 * t) * h * slopes_[i + 1]) /
             h;
    }
  }
  return 0.0;
}

double NonlinearitySpec::f_second(double u) const {
  const double a = coeff_a;
  switch (kind) {
    case NonlinearityKind::Cubic:
      return 6.0 * a * u;
    case NonlinearityKind::Quintic:
      return 20.0 * a * u * u * u;
    case NonlinearityKind::PowerOdd: {
      if (growth_q == 0.0) return 0.0;
      const double sgn = u >= 0.0 ? 1.0 : -1.0;
      return a * growth_q * (growth_q + 1.0) *
             std::pow(std::abs(u), growth_q - 1.0) * sgn;
    }
    case NonlinearityKind::Custom: {
      const int i = locate(u);
      const double h = table_u[i + 1] - table_u[i];
      const double t = (u - table_u[i]) / h;
      return ((12 * t - 6) * table_f[i] + (6 * t - 4) * h * slopes_[i] +
              (-12 * t + 6) * table_f[i + 1] + (6 * t - 2) * h * slopes_[i + 1]) /
             (h * h);
    }
  }
  return 0.0;
}

double NonlinearitySpec::potential(double u) const {
  const double a = coeff_a;
  switch (kind) {
    case NonlinearityKind::Cubic: {
      const double u2 = u * u;
      return a * u2 * u2 / 4.0;
    }
    case NonlinearityKind::Quintic: {
      const double u3 = u * u * u;
      return a * u3 * u3 / 6.0;
    }
    case NonlinearityKind::PowerOdd:
      return a * std::pow(std::abs(u), growth_q + 2.0) / (growth_q + 2.0);
    case NonlinearityKind::Custom: {
      const int i = locate(u);
      const double h = table_u[i + 1] - table_u[i];
      const double t = (u - table_u[i]) / h;
      const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
      // Antiderivative of the Hermite basis in t, times h.
      const double seg =
          h * ((0.5 * t4 - t3 + t) * table_f[i] +
               (0.25 * t4 - 2.0 / 3.0 * t3 + 0.5 * t2) * h * slopes_[i] +
               (-0.5 * t4 + t3) * table_f[i + 1] +
               (0.25 * t4 - t3 / 3.0) * h * slopes_[i + 1]);
      return cumint_[i] + seg - cumint_at_zero_;
    }
  }
  return 0.0;
}

bool NonlinearitySpec::is_odd(double) const {
  if (kind != NonlinearityKind::Custom) return true;
  // Structural check: knots mirrored about zero, values antisymmetric.
  const Eigen::Index n = table_u.size();
  const double uscale = std::max(std::abs(table_u[0]), table_u[n - 1]);
  const double fscale = std::max(1e-300, table_f.abs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(table_u[i] + table_u[n - 1 - i]) > 1e-9 * uscale) return false;
    if (std::abs(table_f[i] + table_f[n - 1 - i]) > 1e-9 * fscale) return false;
  }
  return true;
}

Field eval_f(const NonlinearitySpec& spec, const Field& u) {
  Field out(u.grid);
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    out.values[i] = spec.f(u.values[i]);
  return out;
}

Field eval_potential(const NonlinearitySpec& spec, const Field& u) {
  Field out(u.grid);
  for (Eigen::Index i = 0; i < u.values.size(); ++i)
    out.values[i] = spec.potential(u.values[i]);
  return out;
}

GrowthReport verify_growth(const NonlinearitySpec& spec, double u_range,
                           int samples, double q_claim) {
  require(u_range > 0.0, "verify_growth: u_range must be positive");
  require(samples >= 100, "verify_growth: need >= 100 samples");

  GrowthReport rep;
  rep.q = q_claim >= 0.0 ? q_claim : spec.growth_q;

  const bool natural =
      spec.kind != NonlinearityKind::Custom && rep.q == spec.growth_q;

  // Clip the scan to the custom table's range.
  double lo = -u_range, hi = u_range;
  if (spec.kind == NonlinearityKind::Custom) {
    lo = std::max(lo, spec.table_u[0]);
    hi = std::min(hi, spec.table_u[spec.table_u.size() - 1]);
  }

  std::vector<double> us(samples), fp(samples);
  for (int i = 0; i < samples; ++i) {
    us[i] = lo + (hi - lo) * i / (samples - 1);
    fp[i] = spec.f_prime(us[i]);
  }

  if (natural) {
    // f'(u) = a(q+1)|u|^q exactly, so kappa = C = a(q+1) certifies both
    // inequalities for every u.
    rep.kappa = spec.coeff_a * (rep.q + 1.0);
    rep.big_c = rep.kappa;
    rep.satisfied = true;
  } else {
    // Fit kappa from the tail ratio f'(u)/|u|^q, then pick the smallest
    // C that makes both inequalities hold on the samples.
    const double tail = std::max(1.0, 0.5 * std::max(-lo, hi));
    double ratio_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      const double au = std::abs(us[i]);
      if (au < tail) continue;
      ratio_min = std::min(ratio_min, fp[i] / std::pow(au, rep.q));
    }
    if (!std::isfinite(ratio_min)) ratio_min = 0.0;
    rep.kappa = ratio_min;
    rep.satisfied = ratio_min > 0.0;
    double c_low = 0.0, c_up = 1e-12;
    for (int i = 0; i < samples; ++i) {
      const double aq = std::pow(std::abs(us[i]), rep.q);
      c_low = std::max(c_low, rep.kappa * aq - fp[i]);
      c_up = std::max(c_up, fp[i] / (1.0 + aq));
    }
    rep.big_c = std::max(c_low, c_up);
  }

  // Locate the sample with the smallest margin in either inequality.
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double aq = std::pow(std::abs(us[i]), rep.q);
    const double m1 = fp[i] - (-rep.big_c + rep.kappa * aq);
    const double m2 = rep.big_c * (1.0 + aq) - fp[i];
    const double m = std::min(m1, m2);
    if (m < worst) {
      worst = m;
      rep.worst_sample = us[i];
    }
  }
  if (rep.satisfied && worst < -1e-9 * std::max(1.0, rep.big_c))
    rep.satisfied = false;
  return rep;
}

ShatahStruweReport verify_shatah_struwe_conditions(const NonlinearitySpec& spec,
                                                   double u_range,
                                                   int samples) {
  require(u_range > 0.0, "verify_shatah_struwe: u_range must be positive");

  double lo = -u_range, hi = u_range;
  if (spec.kind == NonlinearityKind::Custom) {
    lo = std::max(lo, spec.table_u[0]);
    hi = std::min(hi, spec.table_u[spec.table_u.size() - 1]);
  }

  const auto scan = [&](double scale, double& c2, double& bal_min) {
    c2 = 0.0;
    bal_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      const double u = scale * (lo + (hi - lo) * i / (samples - 1));
      const double au3 = std::abs(u) * u * u;  // |u|^3 up to sign
      c2 = std::max(c2, std::abs(spec.f_second(u)) / (1.0 + std::abs(au3)));
      bal_min =
          std::min(bal_min, spec.f(u) * u - 4.0 * spec.potential(u));
    }
  };

  ShatahStruweReport rep;
  double c2_full, bal_full, c2_half, bal_half;
  scan(1.0, c2_full, bal_full);
  scan(0.5, c2_half, bal_half);

  rep.second_derivative_constant = c2_full;
  rep.balance_min = bal_full;

  // A constant that keeps growing when the range doubles is not a
  // constant; 1.5x headroom separates saturation from power growth.
  rep.second_derivative_bounded = c2_full <= 1.5 * std::max(c2_half, 1e-12);
  const double tol = 1e-9 * std::max(1.0, std::abs(bal_full));
  rep.balance_bounded =
      bal_full >= -tol || bal_full >= 1.5 * bal_half - tol;
  rep.pass = rep.second_derivative_bounded && rep.balance_bounded;
  return rep;
}

MonotoneBoundReport monotone_fractional_bound_check(const NonlinearitySpec& spec,
                                                    const SpectralField& u,
                                                    double K) {
  if (u.grid.basis() != Basis::TorusExponential)
    throw std::invalid_argument(
        "monotone_fractional_bound_check: torus grid required");
  const int pad = 3 * u.grid.n_per_axis();
  const SpectralField fu = apply_pointwise_dealiased(
      u, pad, [&](double x) { return spec.f(x); });
  const FractionalExponent half(0.5);
  MonotoneBoundReport rep;
  rep.lhs = bilinear_form_spectral(fu, u, half);
  rep.rhs = -K * bilinear_form_spectral(u, u, half);
  rep.residual = rep.lhs - rep.rhs;
  return rep;
}

}  // namespace fwlab
