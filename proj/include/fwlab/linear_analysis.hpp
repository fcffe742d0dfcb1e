#pragma once

#include <complex>
#include <string>
#include <vector>

namespace fwlab {

/// Characteristic roots of lambda^2 + gamma mu^theta lambda + mu = 0 for
/// one Fourier mode, ordered by real part descending (ties by imaginary
/// part descending).
struct ModePair {
  double mu = 0.0;
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
};

enum class SemigroupClass { C0, CInfinity, Analytic };
enum class SmoothingClass { Asymptotic, Instantaneous, SplitUV };

/// Numerical surrogate for the linear-theory classification. The rules
/// (declared, not derived):
///   Analytic    <=> sup |Im l| / |Re l| bounded over mu,
///   C0          <=> sup Re l bounded below by a negative constant,
///   CInfinity   <=> Re l -> -inf with unbounded sector ratio;
///   smoothing SplitUV       <=> a bounded root branch exists,
///   smoothing Asymptotic    <=> sup Re l > -inf,
///   smoothing Instantaneous <=> otherwise;
///   max_regularity <=> Analytic.
struct RegimeReport {
  double theta = 0.0;
  double gamma = 0.0;
  SemigroupClass semigroup = SemigroupClass::C0;
  SmoothingClass smoothing = SmoothingClass::Asymptotic;
  bool max_regularity = false;
  double sup_re_lambda = 0.0;
  double sector_ratio = 0.0;       // sup |Im l| / |Re l| over the sweep
  bool bounded_branch = false;     // min-|l| branch stays O(1) as mu grows
  bool repeated_root_seen = false; // discriminant crossed zero in the sweep
};

const char* to_string(SemigroupClass c);
const char* to_string(SmoothingClass c);

/// Stable quadratic formula: the larger-magnitude root first, the other
/// from the product mu.
ModePair mode_eigenvalues(double mu, double gamma, double theta);

/// ModePairs for count values of mu log-spaced in [1, mu_max].
std::vector<ModePair> spectrum_portrait(double gamma, double theta,
                                        double mu_max, int count);

RegimeReport classify_regime(double gamma, double theta, double mu_max,
                             int count = 400);

/// Known well-posedness range in q for a given theta, from the
/// literature summary, plus whether the quintic case q=4 is covered by
/// the newer results (theta = 0 and theta = 1/2).
struct WellposednessRange {
  double theta = 0.0;
  bool known = false;
  double q_lo = 0.0;
  double q_hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = false;
  bool extended_to_quintic = false;
  std::string note;
};

WellposednessRange wellposedness_range(double theta);

}  // namespace fwlab
