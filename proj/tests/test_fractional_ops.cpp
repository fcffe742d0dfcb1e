#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fwlab/fractional.hpp"
#include "fwlab/nonlinearity.hpp"
#include "fwlab/random_fields.hpp"
#include "fwlab/transforms.hpp"
#include "test_util.hpp"

using namespace fwlab;
using namespace fwlab::testing;

namespace {

SpectralField cos_x1(const Grid& g) {
  return forward_transform(
      sample_field(g, [](double x, double, double) { return std::cos(x); }));
}

}  // namespace

TEST_CASE("FractionalExponent validates its range") {
  CHECK_THROWS_AS(FractionalExponent(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(FractionalExponent(1.1), std::invalid_argument);
  CHECK(FractionalExponent(0.0).s == 0.0);
  CHECK(FractionalExponent(1.0).s == 1.0);
}

TEST_CASE("fractional Laplacian on eigenfunctions") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField c = cos_x1(g);

  // s=1 on cos(x1): eigenvalue |k|^2 = 1.
  const SpectralField lap = apply_fractional_laplacian(c, FractionalExponent(1.0));
  CHECK((lap.coeffs - c.coeffs).abs().maxCoeff() < 1e-14);

  // s=1/2 on cos(2 x1): multiplier (4)^{1/2} = 2.
  const SpectralField c2 = forward_transform(
      sample_field(g, [](double x, double, double) { return std::cos(2 * x); }));
  const SpectralField half =
      apply_fractional_laplacian(c2, FractionalExponent(0.5));
  CHECK((half.coeffs - 2.0 * c2.coeffs).abs().maxCoeff() < 1e-13);

  // Constant fields are annihilated for every s.
  SpectralField k(g);
  k.coeffs[0] = 3.0;
  for (double s : {0.0, 0.3, 1.0}) {
    const SpectralField z = apply_fractional_laplacian(k, FractionalExponent(s));
    CHECK(z.coeffs.abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("spectral bilinear form on a single mode") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField c = cos_x1(g);
  // (cos, (-Delta)^{1/2} cos) = ||cos||^2 = (2 pi)^3 / 2.
  const double got = bilinear_form_spectral(c, c, FractionalExponent(0.5));
  CHECK(rel_err(got, kVol3 / 2.0) < 1e-12);

  // Constant v pairs to zero with anything.
  SpectralField k(g);
  k.coeffs[0] = 2.0;
  CHECK(bilinear_form_spectral(k, c, FractionalExponent(0.7)) == 0.0);

  // s=0 gives the L2 product off the mean.
  const Field rnd = random_field(g, 11);
  const SpectralField r = forward_transform(rnd);
  const double s0 = bilinear_form_spectral(r, r, FractionalExponent(0.0));
  const double l2_minus_mean =
      g.mode_weight() * r.coeffs.abs2().sum() -
      g.mode_weight() * std::norm(r.coeffs[0]);
  CHECK(rel_err(s0, l2_minus_mean) < 1e-12);
}

TEST_CASE("spectral form is symmetric, positive, and consistent with the "
          "operator") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField u = random_band_limited_field(g, 1, 3);
  const SpectralField v = random_band_limited_field(g, 2, 3);
  const FractionalExponent s(0.4);

  CHECK(bilinear_form_spectral(u, v, s) ==
        doctest::Approx(bilinear_form_spectral(v, u, s)).epsilon(1e-14));
  CHECK(bilinear_form_spectral(u, u, s) > 0.0);

  // Equals (v, Lu) computed via the operator + inner product.
  const SpectralField lu = apply_fractional_laplacian(u, s);
  CHECK(rel_err(bilinear_form_spectral(v, u, s), inner_product(v, lu)) < 1e-12);
}

TEST_CASE("multiplier semigroup: s1 then s2 equals s1+s2") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField u = random_band_limited_field(g, 5, 3);
  const SpectralField a = apply_fractional_laplacian(
      apply_fractional_laplacian(u, FractionalExponent(0.3)),
      FractionalExponent(0.45));
  const SpectralField b =
      apply_fractional_laplacian(u, FractionalExponent(0.75));
  CHECK((a.coeffs - b.coeffs).abs().maxCoeff() <
        1e-12 * b.coeffs.abs().maxCoeff());
}

TEST_CASE("integral form vanishes on constants") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  SpectralField k(g);
  k.coeffs[0] = 4.0;
  IntegralQuadratureSpec q;
  q.shells = 8;
  q.directions = 6;
  CHECK(bilinear_form_integral(k, k, FractionalExponent(0.5), q, 1.0) == 0.0);
}

TEST_CASE("integral form validates its inputs") {
  const Grid g2 = make_grid(2, 8, Basis::TorusExponential);
  SpectralField u2(g2);
  IntegralQuadratureSpec q;
  CHECK_THROWS_AS(
      bilinear_form_integral(u2, u2, FractionalExponent(0.5), q, 1.0),
      std::invalid_argument);

  const Grid gs = make_grid(3, 8, Basis::DirichletSine);
  SpectralField us(gs);
  CHECK_THROWS_AS(
      bilinear_form_integral(us, us, FractionalExponent(0.5), q, 1.0),
      std::invalid_argument);

  IntegralQuadratureSpec bad;
  bad.shells = 2;
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  SpectralField u(g);
  CHECK_THROWS_AS(
      bilinear_form_integral(u, u, FractionalExponent(0.5), bad, 1.0),
      std::invalid_argument);
}

TEST_CASE("calibrated integral form reproduces the spectral form") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  IntegralQuadratureSpec q;  // shells=64, directions=26, [1e-3, 32]
  const FractionalExponent s(0.5);
  const double c = calibrate_constant(s, q, g);
  CHECK(c > 0.0);

  // Exact on the calibration mode by construction.
  const SpectralField m = cos_x1(g);
  const double spec_m = bilinear_form_spectral(m, m, s);
  const double int_m = bilinear_form_integral(m, m, s, q, c);
  CHECK(rel_err(int_m, spec_m) < 1e-12);
  CHECK(rel_err(spec_m, kVol3 / 2.0) < 1e-12);

  // Within 5% on an independent two-mode field.
  const SpectralField t = forward_transform(
      sample_field(g, [](double x, double y, double) {
        return std::cos(x) + std::cos(2.0 * y);
      }));
  const double spec_t = bilinear_form_spectral(t, t, s);
  const double int_t = bilinear_form_integral(t, t, s, q, c);
  CHECK(rel_err(int_t, spec_t) < 0.05);
}

TEST_CASE("calibration constant is positive across s") {
  IntegralQuadratureSpec q;
  q.shells = 32;
  for (double s : {0.25, 0.5, 0.75})
    CHECK(calibrate_constant(FractionalExponent(s), q) > 0.0);
}

TEST_CASE("halving h_min moves the s=1/2 constant by < 1%") {
  IntegralQuadratureSpec q;
  const double c0 = calibrate_constant(FractionalExponent(0.5), q);
  IntegralQuadratureSpec q2 = q;
  q2.h_min /= 2.0;
  q2.shells = q.shells + 8;  // keep the log-spacing comparable
  const double c1 = calibrate_constant(FractionalExponent(0.5), q2);
  CHECK(rel_err(c1, c0) < 0.01);
}

TEST_CASE("monotone composition keeps the integral form nonnegative") {
  // (f(u), (-Delta)^{1/2} u) with v = f(u) evaluated pointwise on the
  // shifted samples: the integrand is nonnegative for monotone f.
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField u = random_band_limited_field(g, 9, 3, 1.5);
  const Field u0 = inverse_transform(u);
  const auto f5 = [](double x) { return x * x * x * x * x; };

  const auto dirs = sphere_directions(14);
  const auto radial = radial_log_nodes(1e-2, 16.0, 16);
  const double w = g.quadrature_weight();
  double total = 0.0;
  for (const auto& node : radial)
    for (const auto& d : dirs) {
      const Field us = eval_shifted(
          u, {node.r * d[0], node.r * d[1], node.r * d[2]});
      double inner = 0.0;
      for (Eigen::Index i = 0; i < u0.values.size(); ++i) {
        const double du = us.values[i] - u0.values[i];
        inner += (f5(us.values[i]) - f5(u0.values[i])) * du;
        CHECK((f5(us.values[i]) - f5(u0.values[i])) * du >= 0.0);
      }
      total += node.weight * inner * w * std::pow(node.r, -4.0);
    }
  CHECK(total >= 0.0);
}

TEST_CASE("direction sets are unit vectors with the advertised sizes") {
  for (int d : {6, 14, 26, 40}) {
    const auto dirs = sphere_directions(d);
    CHECK(static_cast<int>(dirs.size()) == d);
    for (const auto& v : dirs) {
      const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
      CHECK(std::abs(n2 - 1.0) < 1e-12);
    }
  }
}
