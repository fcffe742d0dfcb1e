#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fwlab/experiments.hpp"
#include "fwlab/transforms.hpp"
#include "test_util.hpp"

using namespace fwlab;
using namespace fwlab::testing;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.grid = make_grid(3, 8, Basis::TorusExponential);
  spec.problem.gamma = 1.0;
  spec.problem.theta = 0.5;
  spec.problem.nonlinearity = NonlinearitySpec::quintic();
  spec.problem.forcing.kind = ForcingSpec::Kind::Seeded;
  spec.problem.forcing.seed = 7;
  spec.problem.forcing.band = 2;
  spec.problem.forcing.l2_norm = 1.0;
  spec.dt = 0.02;
  spec.snapshot_stride = 5;
  spec.horizon = 20.0;
  spec.data_band = 2;
  return spec;
}

}  // namespace

TEST_CASE("random_energy_state hits the requested norm and is reproducible") {
  const Grid g = make_grid(3, 8, Basis::TorusExponential);
  const SimState a = random_energy_state(g, 5, 3, 2.0, 4.0);
  CHECK(rel_err(energy_space_norm(a, 4.0), 2.0) < 1e-12);
  const SimState b = random_energy_state(g, 5, 3, 2.0, 4.0);
  CHECK((a.u.coeffs == b.u.coeffs).all());
  CHECK((a.v.coeffs == b.v.coeffs).all());
  const SimState c = random_energy_state(g, 6, 3, 2.0, 4.0);
  CHECK_FALSE((a.u.coeffs == c.u.coeffs).all());
}

TEST_CASE("seeded fields realize the same continuum data across N") {
  const Grid coarse = make_grid(3, 8, Basis::TorusExponential);
  const Grid fine = make_grid(3, 16, Basis::TorusExponential);
  const SpectralField a = random_band_limited_field(coarse, 3, 3);
  const SpectralField b = random_band_limited_field(fine, 3, 3);
  // Every coarse mode must appear identically on the fine grid.
  const int nc = coarse.n_per_axis(), nf = fine.n_per_axis();
  for (Eigen::Index i = 0; i < coarse.count(); ++i) {
    const auto j = coarse.unflatten(i);
    Eigen::Index fi = 0;
    for (int a2 = 0; a2 < 3; ++a2) {
      const int k = coarse.axis_wavenumber(j[a2]);
      fi = fi * nf + (k >= 0 ? k : k + nf);
    }
    CHECK(std::abs(a.coeffs[i] - b.coeffs[fi]) == 0.0);
  }
  (void)nc;
}

TEST_CASE("dissipativity: decaying quintic trajectories share a band") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::Dissipativity;
  spec.amplitudes = {0.5, 1.0, 2.0};
  const DissipativityReport rep = dissipativity_sweep(spec);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.tail_spread < 0.10);
  CHECK(rep.absorbing_level > 0.0);
  REQUIRE(rep.entered_ball_times.size() == 3);
  for (double t : rep.entered_ball_times) CHECK(std::isfinite(t));
}

TEST_CASE("dissipativity rejects gamma = 0 and too few amplitudes") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::Dissipativity;
  spec.problem.gamma = 0.0;
  CHECK_THROWS_AS(dissipativity_sweep(spec), std::invalid_argument);

  ExperimentSpec two = small_spec();
  two.kind = ExperimentKind::Dissipativity;
  two.amplitudes = {1.0, 2.0};
  CHECK_THROWS_AS(dissipativity_sweep(two), std::invalid_argument);
}

TEST_CASE("zero data with zero forcing stays inside every ball") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::Dissipativity;
  spec.problem.forcing = ForcingSpec{};  // zero
  spec.amplitudes = {0.0, 0.0, 0.0};
  const DissipativityReport rep = dissipativity_sweep(spec);
  for (const auto& traj : rep.trajectories)
    for (const auto& r : traj.records) CHECK(r.energy_space_norm == 0.0);
}

TEST_CASE("experiments are reproducible") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::Dissipativity;
  spec.amplitudes = {0.5, 1.0, 2.0};
  spec.horizon = 12.0;
  const DissipativityReport a = dissipativity_sweep(spec);
  const DissipativityReport b = dissipativity_sweep(spec);
  REQUIRE(a.trajectories.size() == b.trajectories.size());
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    const auto& ra = a.trajectories[i].records;
    const auto& rb = b.trajectories[i].records;
    REQUIRE(ra.size() == rb.size());
    for (std::size_t j = 0; j < ra.size(); ++j)
      CHECK(ra[j].energy_space_norm == rb[j].energy_space_norm);
  }
}

TEST_CASE("galerkin: linear problem converges to round-off immediately") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::GalerkinConvergence;
  spec.problem.nonlinearity.reset();
  spec.problem.forcing = ForcingSpec{};
  spec.horizon = 10.0;
  spec.dt = 0.01;
  const GalerkinReport rep = galerkin_convergence(spec, {8, 16, 32});
  REQUIRE(rep.rows.size() == 2);
  // Band-limited data evolved exactly: differences at round-off.
  CHECK(rep.rows[0].l2_difference < 1e-11);
  CHECK(rep.rows[1].l2_difference < 1e-11);
}

TEST_CASE("galerkin: quintic differences decrease with N") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::GalerkinConvergence;
  spec.horizon = 10.0;
  spec.dt = 5e-3;
  spec.amplitudes = {1.0};
  const GalerkinReport rep = galerkin_convergence(spec, {8, 16, 32});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.rows[1].l2_difference <= rep.rows[0].l2_difference);
}

TEST_CASE("galerkin validates the resolution list") {
  ExperimentSpec spec = small_spec();
  CHECK_THROWS_AS(galerkin_convergence(spec, {16}), std::invalid_argument);
  CHECK_THROWS_AS(galerkin_convergence(spec, {16, 12}), std::invalid_argument);
  CHECK_THROWS_AS(galerkin_convergence(spec, {15, 30}), std::invalid_argument);
}

TEST_CASE("attractor probe: forced run is bounded, unforced decays") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::AttractorRegularity;
  spec.horizon = 30.0;
  spec.seeds = {1, 2};
  spec.amplitudes = {1.0, 2.0, 4.0};
  const AttractorProbeReport rep = attractor_regularity_probe(spec);
  CHECK(rep.verdict == Verdict::Pass);
  REQUIRE(rep.seeds.size() == 2);
  for (const auto& s : rep.seeds) {
    CHECK(std::isfinite(s.tail_max));
    CHECK(s.tail_slope <= s.slope_stderr + 1e-12);
  }

  // g = 0: trajectories decay toward the origin.
  ExperimentSpec free_spec = spec;
  free_spec.problem.forcing = ForcingSpec{};
  free_spec.seeds = {1};
  const AttractorProbeReport dec = attractor_regularity_probe(free_spec);
  REQUIRE(dec.seeds.size() == 1);
  const auto& hist = dec.seeds[0].e1_norm;
  REQUIRE(hist.size() > 4);
  CHECK(hist.back() < 0.05 * hist.front());
}

TEST_CASE("strichartz probe: cubic pass, quintic reported, theta guard") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::StrichartzProbe;
  spec.problem.theta = 0.0;
  spec.problem.nonlinearity = NonlinearitySpec::cubic();
  spec.amplitudes = {0.5, 1.0};
  spec.horizon = 15.0;
  const StrichartzReport rep = strichartz_probe(spec);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.q == 2.0);

  ExperimentSpec quintic = spec;
  quintic.problem.nonlinearity = NonlinearitySpec::quintic();
  const StrichartzReport rq = strichartz_probe(quintic);
  CHECK(rq.verdict == Verdict::Reported);

  ExperimentSpec wrong = spec;
  wrong.problem.theta = 0.5;
  CHECK_THROWS_AS(strichartz_probe(wrong), std::invalid_argument);
}

TEST_CASE("zero solution yields zero window norms") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::StrichartzProbe;
  spec.problem.theta = 0.0;
  spec.problem.nonlinearity = NonlinearitySpec::cubic();
  spec.problem.forcing = ForcingSpec{};
  spec.amplitudes = {0.0};
  spec.horizon = 12.0;
  const StrichartzReport rep = strichartz_probe(spec);
  for (const auto& hist : rep.window_histories)
    for (const auto& w : hist) CHECK(w.value == 0.0);
}

TEST_CASE("separation probe: identical pair never separates; rate stable") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::SeparationProbe;
  spec.horizon = 10.0;
  spec.amplitudes = {1.0};

  // delta0 = 0 violates the relative-distance precondition.
  CHECK_THROWS_AS(separation_probe(spec, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(separation_probe(spec, 1e-3), std::invalid_argument);

  const SeparationReport rep = separation_probe(spec, 1e-8);
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(std::isfinite(rep.rate));
  // Linear-ish regime: the separation cannot collapse to zero.
  for (double s : rep.separation) CHECK(s >= 0.0);
}

TEST_CASE("linear separation follows the propagator exactly") {
  ExperimentSpec spec = small_spec();
  spec.kind = ExperimentKind::SeparationProbe;
  spec.problem.nonlinearity.reset();
  spec.problem.forcing = ForcingSpec{};
  spec.horizon = 10.0;
  spec.amplitudes = {1.0};
  const SeparationReport rep = separation_probe(spec, 1e-8);
  // f = 0: the difference solves the linear equation, so its E-norm is
  // independent of delta0 scaling and decays with the damped flow.
  CHECK(rep.verdict == Verdict::Pass);
  CHECK(rep.separation.back() < rep.separation.front());
}
