#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "fwlab/diagnostics.hpp"
#include "fwlab/fractional.hpp"
#include "fwlab/random_fields.hpp"
#include "fwlab/transforms.hpp"
#include "test_util.hpp"

using namespace fwlab;
using namespace fwlab::testing;

namespace {

SimState cos_state(const Grid& g) {
  SimState s(g);
  s.u = forward_transform(
      sample_field(g, [](double x, double, double) { return std::cos(x); }));
  return s;
}

}  // namespace

TEST_CASE("energy of the zero state is zero") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  ModelParams params;
  params.nonlinearity = NonlinearitySpec::cubic();
  CHECK(energy(SimState(g), params) == 0.0);
}

TEST_CASE("energy of cos(x1) with the cubic potential: closed form") {
  // 1/2 ||grad u||^2 = (2pi)^3/4, int u^4/4 = (3/32)(2pi)^3:
  // E = (11/32)(2pi)^3. Cross-checked against a plain quadrature oracle.
  const Grid g = make_grid(3, 16, Basis::TorusExponential);
  ModelParams params;
  params.nonlinearity = NonlinearitySpec::cubic();
  const SimState s = cos_state(g);
  const double want = 11.0 / 32.0 * kVol3;
  CHECK(rel_err(energy(s, params), want) < 1e-12);

  // Oracle: fine-grid Riemann quadrature of the closed-form integrand.
  const Grid fine = make_grid(3, 32, Basis::TorusExponential);
  const Field uf = sample_field(fine, [](double x, double, double) {
    return std::cos(x);
  });
  const Field gradsq = sample_field(fine, [](double x, double, double) {
    return std::sin(x) * std::sin(x);
  });
  const double oracle = 0.5 * quadrature(gradsq, [](double v) { return v; }) +
                        quadrature(uf, [](double v) {
                          return 0.25 * v * v * v * v;
                        });
  CHECK(rel_err(energy(s, params), oracle) < 1e-12);
}

TEST_CASE("kinetic term scales quadratically") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  ModelParams params;
  SimState s(g);
  s.v = random_band_limited_field(g, 3, 3, 1.0);
  const double e1 = energy(s, params);
  s.v.coeffs *= 2.0;
  CHECK(rel_err(energy(s, params), 4.0 * e1) < 1e-12);
}

TEST_CASE("energy subtracts the forcing pairing") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  ModelParams params;
  params.forcing = forward_transform(
      sample_field(g, [](double x, double, double) { return std::cos(x); }));
  const SimState s = cos_state(g);
  // E = 1/2||grad u||^2 - (g,u) = vol/4 - vol/2.
  CHECK(rel_err(energy(s, params), kVol3 / 4.0 - kVol3 / 2.0) < 1e-12);
}

TEST_CASE("sobolev_norm: L2 at s=0, closed form at s=1, monotone in s") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField c = cos_state(g).u;
  CHECK(rel_err(sobolev_norm(c, 0.0), std::sqrt(kVol3 / 2.0)) < 1e-12);
  CHECK(rel_err(sobolev_norm(c, 1.0), std::pow(2.0 * kPi, 1.5)) < 1e-12);

  const SpectralField r = random_band_limited_field(g, 8, 3);
  double prev = sobolev_norm(r, 0.0);
  for (double s : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double cur = sobolev_norm(r, s);
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(sobolev_norm(r, 3.5), std::invalid_argument);
}

TEST_CASE("H1 norm dominates the homogeneous bilinear form") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField r = random_band_limited_field(g, 12, 3);
  const double h1 = sobolev_norm(r, 1.0);
  const double homog = bilinear_form_spectral(r, r, FractionalExponent(1.0));
  CHECK(h1 * h1 >= homog - 1e-12 * std::max(1.0, homog));
}

TEST_CASE("energy_space_norm: zero state, L6 closed form, shift invariance") {
  const Grid g = make_grid(3, 16, Basis::TorusExponential);
  CHECK(energy_space_norm(SimState(g), 4.0) == 0.0);

  // ||cos||_{L6}^6 = (5/16)(2pi)^3.
  const SimState s = cos_state(g);
  const double l6 = std::pow(5.0 / 16.0 * kVol3, 1.0 / 6.0);
  const double h1 = std::pow(2.0 * kPi, 1.5);
  CHECK(rel_err(energy_space_norm(s, 4.0), h1 + l6) < 1e-11);

  // Translation invariance on the torus.
  SimState shifted(g);
  shifted.u = forward_transform(eval_shifted(s.u, {0.7, 0.0, 0.0}));
  CHECK(rel_err(energy_space_norm(shifted, 4.0), energy_space_norm(s, 4.0)) <
        1e-11);
}

TEST_CASE("norms are absolutely homogeneous") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  SimState s(g);
  s.u = random_band_limited_field(g, 31, 3);
  s.v = random_band_limited_field(g, 32, 3);
  const double c = -2.7;

  const double n0 = energy_space_norm(s, 4.0);
  const double s0 = sobolev_norm(s.u, 1.5);
  const double l0 = lp_norm_refined(s.u, 12.0, 2);
  SimState t(g);
  t.u.coeffs = c * s.u.coeffs;
  t.v.coeffs = c * s.v.coeffs;
  CHECK(rel_err(energy_space_norm(t, 4.0), std::abs(c) * n0) < 1e-12);
  CHECK(rel_err(sobolev_norm(t.u, 1.5), std::abs(c) * s0) < 1e-12);
  CHECK(rel_err(lp_norm_refined(t.u, 12.0, 2), std::abs(c) * l0) < 1e-12);
}

TEST_CASE("energy identity residual: conservative runs reduce to drift") {
  // gamma = 0: the identity is conservation, so the residual per
  // interval is |E(t2) - E(t1)|.
  std::vector<DiagnosticsRecord> rec(3);
  rec[0].t = 0.0;
  rec[0].energy_E = 5.0;
  rec[1].t = 0.5;
  rec[1].energy_E = 5.002;
  rec[2].t = 1.0;
  rec[2].energy_E = 4.999;
  const auto res = energy_identity_residuals(rec);
  CHECK(res[0] == doctest::Approx(0.002));
  CHECK(res[1] == doctest::Approx(0.003));

  rec[1].t = 0.4;  // irregular spacing must be rejected
  CHECK_THROWS_AS(energy_identity_residuals(rec), std::invalid_argument);
}

TEST_CASE("window norms: constants, zero, scaling, snapshot minimum") {
  // u == 1 for a unit window: L4_L12 value is ((2pi)^3)^{1/12}.
  std::vector<DiagnosticsRecord> rec;
  const double l12_const = std::pow(kVol3, 1.0 / 12.0);
  for (int i = 0; i <= 10; ++i) {
    DiagnosticsRecord r;
    r.t = 0.1 * i;
    r.l12_norm = l12_const;
    r.h32 = 2.0;
    rec.push_back(r);
  }
  const WindowNorm w = strichartz_window_norm(rec, 0, 10);
  CHECK(rel_err(w.value, l12_const) < 1e-12);
  CHECK(w.t_start == 0.0);

  const WindowNorm h = h32_window_norm(rec, 0, 10);
  CHECK(rel_err(h.value, 2.0) < 1e-12);

  // Zero history gives zero.
  for (auto& r : rec) {
    r.l12_norm = 0.0;
  }
  CHECK(strichartz_window_norm(rec, 0, 10).value == 0.0);

  // Fewer than 9 snapshots is an error.
  CHECK_THROWS_AS(strichartz_window_norm(rec, 0, 5), std::invalid_argument);
}

TEST_CASE("stationary cos field: H3/2 window equals the static norm") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SpectralField c = cos_state(g).u;
  const double want = sobolev_norm(c, 1.5);  // = (2^{3/2} vol / 2)^{1/2}
  CHECK(rel_err(want, std::sqrt(std::pow(2.0, 1.5) * kVol3 / 2.0)) < 1e-12);

  std::vector<DiagnosticsRecord> rec;
  for (int i = 0; i <= 10; ++i) {
    DiagnosticsRecord r;
    r.t = 0.1 * i;
    r.h32 = want;
    rec.push_back(r);
  }
  CHECK(rel_err(h32_window_norm(rec, 0, 10).value, want) < 1e-12);
}

TEST_CASE("lyapunov identity: zero trajectory and linear-run residual") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  ModelParams params;
  params.gamma = 1.0;
  params.theta = 0.5;

  // Zero trajectory: all samples vanish.
  std::vector<LyapunovSample> zero(11);
  for (int i = 0; i <= 10; ++i) zero[i].t = 0.1 * i;
  CHECK(lyapunov_identity_residual_per_unit_time(zero) == 0.0);

  // Linear run: residual limited by the snapshot trapezoid only.
  SimState init(g);
  init.u = random_band_limited_field(g, 41, 2, 1.0);
  init.v = random_band_limited_field(g, 42, 2, 1.0);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.snapshot_stride = 10;
  cfg.t_end = 2.0;
  DiagnosticsCollector collector(params);
  run(init, params, cfg, {collector.sink()});
  CHECK(lyapunov_identity_residual_per_unit_time(collector.lyapunov_samples()) <
        1e-6);
}

TEST_CASE("lyapunov residual converges at order 2 on a quintic run") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  ModelParams params;
  params.gamma = 1.0;
  params.theta = 0.5;
  params.nonlinearity = NonlinearitySpec::quintic();
  params.forcing = random_band_limited_field(g, 51, 2, 0.5);

  SimState init(g);
  init.u = random_band_limited_field(g, 52, 2, 0.6);
  init.v = random_band_limited_field(g, 53, 2, 0.6);

  double res[2];
  for (int pass = 0; pass < 2; ++pass) {
    IntegratorConfig cfg;
    cfg.dt = pass == 0 ? 4e-3 : 2e-3;
    cfg.snapshot_stride = 5;
    cfg.t_end = 1.0;
    DiagnosticsCollector collector(params);
    run(init, params, cfg, {collector.sink()});
    res[pass] = lyapunov_identity_residual_per_unit_time(
        collector.lyapunov_samples());
  }
  const double ratio = res[0] / res[1];
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("records carry the documented CSV schema") {
  std::vector<DiagnosticsRecord> rec(1);
  rec[0].t = 1.0;
  rec[0].energy_E = 2.0;
  std::ostringstream os;
  records_to_csv(rec, os);
  const std::string head = os.str().substr(0, os.str().find('\n'));
  CHECK(head ==
        "t,energy_E,energy_space_norm,h1,h32,h2,damping_integrand,l12,"
        "lyapunov_quantity");
}

TEST_CASE("damping integrand matches the spectral sum") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  ModelParams params;
  params.gamma = 2.0;
  params.theta = 0.5;
  SimState s(g);
  s.v = cos_state(g).u;
  // gamma ||(-Delta)^{1/4} v||^2 with v = cos: 2 * 1^{1/2} * vol/2.
  CHECK(rel_err(damping_integrand(s, params), 2.0 * kVol3 / 2.0) < 1e-12);
}
