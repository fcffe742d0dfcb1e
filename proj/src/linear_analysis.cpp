#include "fwlab/linear_analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fwlab {

const char* to_string(SemigroupClass c) {
  switch (c) {
    case SemigroupClass::C0: return "C0";
    case SemigroupClass::CInfinity: return "CInfinity";
    case SemigroupClass::Analytic: return "Analytic";
  }
  return "?";
}

const char* to_string(SmoothingClass c) {
  switch (c) {
    case SmoothingClass::Asymptotic: return "Asymptotic";
    case SmoothingClass::Instantaneous: return "Instantaneous";
    case SmoothingClass::SplitUV: return "SplitUV";
  }
  return "?";
}

namespace {

// Damping multiplier mu^theta with 0^0 = 1: theta = 0 is the identity
// operator, so the mean mode is damped there and only there.
double damping_multiplier(double mu, double theta) {
  if (mu == 0.0) return theta == 0.0 ? 1.0 : 0.0;
  return std::pow(mu, theta);
}

}  // namespace

ModePair mode_eigenvalues(double mu, double gamma, double theta) {
  if (mu < 0.0) throw std::invalid_argument("mode_eigenvalues: mu must be >= 0");
  if (!(gamma > 0.0))
    throw std::invalid_argument("mode_eigenvalues: gamma must be positive");
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("mode_eigenvalues: theta must lie in [0,1]");

  const double b = gamma * damping_multiplier(mu, theta);
  ModePair p;
  p.mu = mu;
  if (mu == 0.0) {
    p.lambda_plus = 0.0;
    p.lambda_minus = -b;
    return p;
  }
  const double disc = b * b - 4.0 * mu;
  if (disc > 0.0) {
    // b > 0, so the larger-magnitude root is -(b + sqrt(disc))/2; the
    // other follows from the product mu without cancellation.
    const double big = -0.5 * (b + std::sqrt(disc));
    p.lambda_plus = mu / big;
    p.lambda_minus = big;
  } else if (disc == 0.0) {
    p.lambda_plus = -0.5 * b;
    p.lambda_minus = -0.5 * b;
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    p.lambda_plus = {-0.5 * b, im};
    p.lambda_minus = {-0.5 * b, -im};
  }
  return p;
}

std::vector<ModePair> spectrum_portrait(double gamma, double theta,
                                        double mu_max, int count) {
  if (!(mu_max >= 1.0))
    throw std::invalid_argument("spectrum_portrait: mu_max must be >= 1");
  if (count < 10)
    throw std::invalid_argument("spectrum_portrait: count must be >= 10");
  std::vector<ModePair> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double mu =
        count == 1 ? 1.0 : std::exp(std::log(mu_max) * i / (count - 1));
    out.push_back(mode_eigenvalues(mu, gamma, theta));
  }
  return out;
}

RegimeReport classify_regime(double gamma, double theta, double mu_max,
                             int count) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("classify_regime: theta must lie in [0,1]");
  if (!(mu_max >= 1e4))
    throw std::invalid_argument(
        "classify_regime: mu_max must be >= 1e4 (asymptotics need range)");

  const auto portrait = spectrum_portrait(gamma, theta, mu_max, count);

  RegimeReport rep;
  rep.theta = theta;
  rep.gamma = gamma;

  // Indicators at the sweep end vs two decades earlier: growth ratios
  // separate bounded quantities from power growth.
  const auto at = [&](double mu) { return mode_eigenvalues(mu, gamma, theta); };
  const double mu_ref = mu_max / 100.0;

  const auto sector = [](const ModePair& p) {
    const double re = std::abs(p.lambda_plus.real());
    return re == 0.0 ? 0.0 : std::abs(p.lambda_plus.imag()) / re;
  };
  const auto min_mag = [](const ModePair& p) {
    return std::min(std::abs(p.lambda_plus), std::abs(p.lambda_minus));
  };

  double sup_re = -std::numeric_limits<double>::infinity();
  double sup_sector = 0.0;
  bool sign_seen[2] = {false, false};
  for (const auto& p : portrait) {
    sup_re = std::max(sup_re, p.lambda_plus.real());
    sup_sector = std::max(sup_sector, sector(p));
    const double b = gamma * damping_multiplier(p.mu, theta);
    const double disc = b * b - 4.0 * p.mu;
    sign_seen[disc >= 0.0 ? 1 : 0] = true;
  }
  rep.sup_re_lambda = sup_re;
  rep.sector_ratio = sup_sector;
  rep.repeated_root_seen = sign_seen[0] && sign_seen[1];

  const ModePair p_end = at(mu_max);
  const ModePair p_ref = at(mu_ref);
  constexpr double kGrowth = 1.05;

  const bool re_bounded =
      std::abs(p_end.lambda_plus.real()) <=
      kGrowth * std::abs(p_ref.lambda_plus.real());
  const bool sector_bounded =
      sector(p_end) <= std::max(kGrowth * sector(p_ref), 1e-9) ||
      sector(p_end) == 0.0;
  rep.bounded_branch = min_mag(p_end) <= kGrowth * min_mag(p_ref);

  if (sector_bounded)
    rep.semigroup = SemigroupClass::Analytic;
  else if (re_bounded)
    rep.semigroup = SemigroupClass::C0;
  else
    rep.semigroup = SemigroupClass::CInfinity;

  if (rep.bounded_branch)
    rep.smoothing = SmoothingClass::SplitUV;
  else if (re_bounded)
    rep.smoothing = SmoothingClass::Asymptotic;
  else
    rep.smoothing = SmoothingClass::Instantaneous;

  rep.max_regularity = rep.semigroup == SemigroupClass::Analytic;
  return rep;
}

WellposednessRange wellposedness_range(double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("wellposedness_range: theta must lie in [0,1]");
  WellposednessRange r;
  r.theta = theta;
  if (theta == 0.0) {
    r.known = true;
    r.q_lo = 0.0;
    r.q_hi = 2.0;
    r.lo_closed = true;
    r.hi_closed = true;
    r.extended_to_quintic = true;
    r.note = "classical range [0,2]; q=4 reached in the Shatah-Struwe class";
  } else if (theta < 0.5) {
    r.known = false;
    r.note = "open";
  } else if (theta == 0.5) {
    r.known = true;
    r.q_lo = 0.0;
    r.q_hi = 4.0;
    r.lo_closed = true;
    r.hi_closed = false;
    r.extended_to_quintic = true;
    r.note = "prior range [0,4); extended to include q=4";
  } else if (theta < 0.75) {
    r.known = true;
    r.q_lo = 0.0;
    r.q_hi = 8.0 * theta / (3.0 - 4.0 * theta);
    r.lo_closed = true;
    r.hi_closed = false;
    r.note = "q < 8*theta/(3-4*theta)";
  } else {
    r.known = true;
    r.q_lo = 0.0;
    r.q_hi = std::numeric_limits<double>::infinity();
    r.lo_closed = false;
    r.hi_closed = false;
    r.note = "all growth exponents";
  }
  return r;
}

}  // namespace fwlab
