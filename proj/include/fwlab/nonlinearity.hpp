#pragma once

#include <Eigen/Core>

#include "fwlab/field.hpp"

namespace fwlab {

enum class NonlinearityKind { PowerOdd, Cubic, Quintic, Custom };

/// The nonlinear term f and its potential F. Built-in kinds are odd with
/// known derivatives; Custom interpolates a table with a monotone cubic
/// (Fritsch-Carlson) and refuses to extrapolate.
struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::Quintic;
  double growth_q = 4.0;
  double coeff_a = 1.0;

  // Custom only: strictly increasing sample points (must straddle 0).
  Eigen::ArrayXd table_u;
  Eigen::ArrayXd table_f;

  static NonlinearitySpec power_odd(double q, double a = 1.0);
  static NonlinearitySpec cubic(double a = 1.0);
  static NonlinearitySpec quintic(double a = 1.0);
  static NonlinearitySpec custom(Eigen::ArrayXd u, Eigen::ArrayXd f,
                                 double growth_q);

  double f(double u) const;
  double f_prime(double u) const;
  double f_second(double u) const;
  double potential(double u) const;

  bool is_odd(double u_range = 10.0) const;

 private:
  // Custom interpolant data, prepared once in custom().
  Eigen::ArrayXd slopes_;
  Eigen::ArrayXd cumint_;   // integral of the interpolant from table_u[0]
  double cumint_at_zero_ = 0.0;
  int locate(double u) const;
};

/// Certificate for -C + kappa |u|^q <= f'(u) <= C(1 + |u|^q) on the
/// sampled range. Built-in kinds at their natural exponent carry the
/// exact algebraic constants; everything else is fitted from samples.
struct GrowthReport {
  double kappa = 0.0;
  double big_c = 0.0;
  double q = 0.0;
  bool satisfied = false;
  double worst_sample = 0.0;  // u with the smallest inequality margin
};

GrowthReport verify_growth(const NonlinearitySpec& spec, double u_range,
                           int samples, double q_claim = -1.0);

/// Checks |f''(u)| <= C(1+|u|^3) and f(u)u - 4F(u) >= -C by sampling,
/// with a range-doubling probe to flag constants that drift with the
/// range (the desk-scale stand-in for "holds for all u").
struct ShatahStruweReport {
  bool pass = false;
  bool second_derivative_bounded = false;
  double second_derivative_constant = 0.0;
  bool balance_bounded = false;
  double balance_min = 0.0;  // min of f(u)u - 4F(u) on the range
};

ShatahStruweReport verify_shatah_struwe_conditions(const NonlinearitySpec& spec,
                                                   double u_range,
                                                   int samples = 4001);

/// Evaluates (f(u), (-Delta)^{1/2} u) with a dealiased f(u) and compares
/// it against -K ||(-Delta)^{1/4} u||^2. residual = lhs - rhs must not be
/// significantly negative for monotone f with K = 0.
struct MonotoneBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

MonotoneBoundReport monotone_fractional_bound_check(const NonlinearitySpec& spec,
                                                    const SpectralField& u,
                                                    double K);

Field eval_f(const NonlinearitySpec& spec, const Field& u);
Field eval_potential(const NonlinearitySpec& spec, const Field& u);

}  // namespace fwlab
