#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fwlab/nonlinearity.hpp"
#include "fwlab/random_fields.hpp"
#include "fwlab/transforms.hpp"
#include "test_util.hpp"

using namespace fwlab;
using namespace fwlab::testing;

TEST_CASE("eval_f pointwise values") {
  const Grid g = make_grid(1, 8, Basis::TorusExponential);
  const auto quintic = NonlinearitySpec::quintic();

  const Field two = sample_field(g, [](double, double, double) { return 2.0; });
  CHECK((eval_f(quintic, two).values - 32.0).abs().maxCoeff() < 1e-13);

  const Field zero(g);
  for (const auto& spec :
       {NonlinearitySpec::cubic(), quintic, NonlinearitySpec::power_odd(1.5)})
    CHECK(eval_f(spec, zero).values.abs().maxCoeff() == 0.0);
}

TEST_CASE("cubic of cos matches the trig identity") {
  // cos^3 = (3/4) cos x + (1/4) cos 3x; checked pointwise and spectrally.
  const Grid g = make_grid(1, 16, Basis::TorusExponential);
  const Field f = sample_field(g, [](double x, double, double) {
    return std::cos(x);
  });
  const Field cubed = eval_f(NonlinearitySpec::cubic(), f);
  const Field want = sample_field(g, [](double x, double, double) {
    return 0.75 * std::cos(x) + 0.25 * std::cos(3.0 * x);
  });
  CHECK((cubed.values - want.values).abs().maxCoeff() < 1e-14);
}

TEST_CASE("potentials integrate f from zero") {
  const auto quintic = NonlinearitySpec::quintic();
  CHECK(quintic.potential(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(quintic.potential(0.0) == 0.0);
  const auto cubic = NonlinearitySpec::cubic();
  CHECK(cubic.potential(2.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(NonlinearitySpec::power_odd(1.0).potential(0.0) == 0.0);
}

TEST_CASE("potential consistency: finite differences of F reproduce f") {
  const double h = 1e-5;
  for (const auto& spec :
       {NonlinearitySpec::quintic(), NonlinearitySpec::cubic(),
        NonlinearitySpec::power_odd(3.0, 0.7)}) {
    for (double u : {-1.7, -0.4, 0.3, 1.1, 2.5}) {
      const double fd =
          (spec.potential(u + h) - spec.potential(u - h)) / (2.0 * h);
      CHECK(std::abs(fd - spec.f(u)) < 1e-7 * std::max(1.0, std::abs(spec.f(u))));
    }
  }
}

TEST_CASE("oddness of the built-in kinds") {
  const Grid g = make_grid(1, 32, Basis::TorusExponential);
  const Field u = random_field(g, 17);
  Field minus_u(g);
  minus_u.values = -u.values;
  for (const auto& spec :
       {NonlinearitySpec::quintic(), NonlinearitySpec::cubic(),
        NonlinearitySpec::power_odd(2.5)}) {
    const Field a = eval_f(spec, minus_u);
    const Field b = eval_f(spec, u);
    CHECK((a.values + b.values).abs().maxCoeff() < 1e-13);
    CHECK(spec.is_odd());
  }
}

TEST_CASE("verify_growth certifies the quintic with kappa = C = 5") {
  const GrowthReport r = verify_growth(NonlinearitySpec::quintic(), 10.0, 1001);
  CHECK(r.satisfied);
  CHECK(r.kappa == doctest::Approx(5.0));
  CHECK(r.big_c == doctest::Approx(5.0));
  CHECK(r.q == 4.0);
}

TEST_CASE("verify_growth accepts the cubic at claimed q = 4") {
  // 3u^2 <= C(1+u^4) with some positive kappa fitted from the tail.
  const GrowthReport r =
      verify_growth(NonlinearitySpec::cubic(), 10.0, 2001, 4.0);
  CHECK(r.satisfied);
  CHECK(r.kappa > 0.0);
  CHECK(r.q == 4.0);
}

TEST_CASE("verify_growth rejects f(u) = -u") {
  Eigen::ArrayXd us(21), fs(21);
  for (int i = 0; i < 21; ++i) {
    us[i] = -10.0 + i;
    fs[i] = -us[i];
  }
  const auto spec = NonlinearitySpec::custom(us, fs, 1.0);
  const GrowthReport r = verify_growth(spec, 10.0, 501);
  CHECK_FALSE(r.satisfied);
}

TEST_CASE("Shatah-Struwe conditions: quintic and cubic pass, -u^5 fails") {
  const ShatahStruweReport q =
      verify_shatah_struwe_conditions(NonlinearitySpec::quintic(), 10.0);
  CHECK(q.pass);
  CHECK(q.balance_min >= -1e-12);  // f(u)u - 4F(u) = u^6/3 >= 0

  const ShatahStruweReport c =
      verify_shatah_struwe_conditions(NonlinearitySpec::cubic(), 10.0);
  CHECK(c.pass);

  Eigen::ArrayXd us(41), fs(41);
  for (int i = 0; i < 41; ++i) {
    us[i] = -4.0 + 0.2 * i;
    fs[i] = -std::pow(us[i], 5.0);
  }
  const ShatahStruweReport bad =
      verify_shatah_struwe_conditions(NonlinearitySpec::custom(us, fs, 4.0), 4.0);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.balance_bounded);
}

TEST_CASE("quintic balance identity holds sample-exactly") {
  const auto spec = NonlinearitySpec::quintic();
  for (double u : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    const double balance = spec.f(u) * u - 4.0 * spec.potential(u);
    CHECK(balance == doctest::Approx(std::pow(u, 6.0) / 3.0).epsilon(1e-13));
    CHECK(balance >= 0.0);
  }
}

TEST_CASE("monotone fractional bound: quintic with K = 0") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const auto quintic = NonlinearitySpec::quintic();

  // u = cos(x1): the pairing is nonnegative.
  const SpectralField c = forward_transform(
      sample_field(g, [](double x, double, double) { return std::cos(x); }));
  const MonotoneBoundReport rc = monotone_fractional_bound_check(quintic, c, 0.0);
  CHECK(rc.lhs >= 0.0);
  CHECK(rc.residual >= -1e-12);

  // Zero field: both sides vanish.
  const MonotoneBoundReport rz =
      monotone_fractional_bound_check(quintic, SpectralField(g), 0.0);
  CHECK(rz.lhs == 0.0);
  CHECK(rz.rhs == 0.0);

  // Random smooth fields: residual ~ 0 up to roundoff scaled by |u|^6.
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    const SpectralField u = random_band_limited_field(g, seed, 3, 2.0);
    const Field phys = inverse_transform(u);
    const double scale = std::pow(phys.values.abs().maxCoeff(), 6.0);
    const MonotoneBoundReport r = monotone_fractional_bound_check(quintic, u, 0.0);
    CHECK(r.residual >= -1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("custom interpolant reproduces tabulated smooth functions") {
  // Table of u^3 on [-3,3]; the monotone cubic must track it closely.
  const int m = 61;
  Eigen::ArrayXd us(m), fs(m);
  for (int i = 0; i < m; ++i) {
    us[i] = -3.0 + 0.1 * i;
    fs[i] = us[i] * us[i] * us[i];
  }
  const auto spec = NonlinearitySpec::custom(us, fs, 2.0);
  for (double u : {-2.55, -1.03, 0.21, 1.77, 2.94}) {
    CHECK(std::abs(spec.f(u) - u * u * u) < 5e-3);
    CHECK(std::abs(spec.potential(u) - 0.25 * u * u * u * u) < 5e-3);
  }
  CHECK(spec.is_odd());
  CHECK_THROWS_AS(spec.f(3.5), std::domain_error);
  CHECK_THROWS_AS(spec.f(-3.5), std::domain_error);
}

TEST_CASE("spec factories enforce their invariants") {
  CHECK_THROWS_AS(NonlinearitySpec::quintic(0.0), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::power_odd(-1.0), std::invalid_argument);
  CHECK(NonlinearitySpec::cubic().growth_q == 2.0);
  CHECK(NonlinearitySpec::quintic().growth_q == 4.0);

  Eigen::ArrayXd bad_u(4), f4(4);
  bad_u << 0.0, 1.0, 1.0, 2.0;  // not strictly increasing
  f4 << 0.0, 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(NonlinearitySpec::custom(bad_u, f4, 1.0),
                  std::invalid_argument);
  Eigen::ArrayXd pos_u(4);
  pos_u << 1.0, 2.0, 3.0, 4.0;  // does not straddle zero
  CHECK_THROWS_AS(NonlinearitySpec::custom(pos_u, f4, 1.0),
                  std::invalid_argument);
}
