#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ness/errors.hpp"
#include "ness/evolve.hpp"
#include "ness/metrics.hpp"
#include "ness/steady.hpp"

using namespace ness;

namespace {

const RadialGrid kGrid{};

double sup_diff(const RadialCharFn& a, const RadialCharFn& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("step: stationary at the Maxwellian equilibrium") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn m = charfn_maxwellian(1.0 / 3.0, kGrid);
  CHECK(sup_diff(step(m, m, iso, 0.5, 0.02), m) < 1e-8);
}

TEST_CASE("step: stationary at the computed NESS") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn phi_r = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  const RadialCharFn ness = solve_ness(phi_r, iso, 0.5, 1e-10, 200).phi_inf;
  // The scheme's fixed point coincides with Phi's, so the per-step change is
  // (1 - exp(-dt)) times the solver residual.
  CHECK(sup_diff(step(ness, phi_r, iso, 0.5, 0.02), ness) < 1e-6);
  CHECK(gtw_distance(step(ness, phi_r, iso, 0.5, 0.02), ness) < 1e-6);
}

TEST_CASE("step: first-order consistency with the flow (Richardson)") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn phi_r = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  const RadialCharFn rhs = phi_map(phi_r, phi_r, iso, 0.5);

  const auto slope_error = [&](double dt) {
    const RadialCharFn next = step(phi_r, phi_r, iso, 0.5, dt);
    double worst = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double numeric = (next[i] - phi_r[i]) / dt;
      worst = std::max(worst, std::abs(numeric - (rhs[i] - phi_r[i])));
    }
    return worst;
  };
  const double e1 = slope_error(0.02);
  const double e2 = slope_error(0.01);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("step rejects out-of-range dt") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn m = charfn_maxwellian(1.0 / 3.0, kGrid);
  CHECK_THROWS_AS(step(m, m, iso, 0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(step(m, m, iso, 0.5, 0.3), ConfigError);
}

TEST_CASE("run from the reservoir: monotone GTW decay and class preservation") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn phi_r = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  const RadialCharFn ness = solve_ness(phi_r, iso, 0.5, 1e-10, 200).phi_inf;
  EvolveOptions opts;
  opts.dt = 0.02;
  opts.t_end = 10.0;
  opts.record_interval = 0.2;
  opts.snapshot_times = {1.0, 5.0};
  const Trajectory traj = run(phi_r, phi_r, iso, 0.5, ness, opts);
  CHECK(traj.gtw_tracked);
  REQUIRE(traj.times.size() == traj.gtw_to_ness.size());
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    CHECK(traj.times[i] > traj.times[i - 1]);
    const double budget = 10.0 * 0.02 * 0.02 * (traj.times[i] - traj.times[i - 1]);
    CHECK(traj.gtw_to_ness[i] <= traj.gtw_to_ness[i - 1] + budget);
    CHECK(traj.gtw_to_ness[i] >= 0.0);
  }
  REQUIRE(traj.snapshots.size() == 2);
  for (const auto& [t, snap] : traj.snapshots) {
    CHECK(snap[0] == 1.0);
    for (std::size_t i = 0; i < snap.size(); ++i) REQUIRE(std::abs(snap[i]) <= 1.0 + 1e-9);
  }
}

TEST_CASE("run: fitted m2 decay rate matches theory within 1%") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn phi_r = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  EvolveOptions opts;
  opts.dt = 0.02;
  opts.t_end = 40.0;
  opts.record_interval = 0.2;
  const RadialCharFn phi0 = charfn_maxwellian(0.5, kGrid);  // energy 1.5
  const Trajectory traj = run(phi0, phi_r, iso, 0.5, phi_r, opts);
  CHECK_FALSE(traj.gtw_tracked);  // metric domain excludes unequal energies

  std::vector<double> dev(traj.m2_deviation.size());
  for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(traj.m2_deviation[i]);
  CHECK(dev.front() == doctest::Approx(0.5).epsilon(1e-6));
  std::size_t used = 0;
  const double slope = fit_log_slope(traj.times, dev, 1e-8, 1e-1, &used);
  CHECK(used >= 50);
  const double rate = iso.moment_decay_rate(0.5);
  CHECK(std::abs(-slope - rate) <= 0.01 * rate);
}

TEST_CASE("run started at the NESS stays within the truncation budget") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn phi_r = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  const RadialCharFn ness = solve_ness(phi_r, iso, 0.5, 1e-10, 200).phi_inf;
  EvolveOptions opts;
  opts.dt = 0.02;
  opts.t_end = 5.0;
  opts.record_interval = 0.5;
  const Trajectory traj = run(ness, phi_r, iso, 0.5, ness, opts);
  for (double d : traj.gtw_to_ness) CHECK(d < 10.0 * opts.dt * opts.dt);
}

TEST_CASE("run: halving dt shows first-order convergence of the terminal state") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn phi_r = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  const RadialCharFn ness = solve_ness(phi_r, iso, 0.5, 1e-10, 200).phi_inf;
  const auto terminal_gtw = [&](double dt) {
    EvolveOptions opts;
    opts.dt = dt;
    opts.t_end = 2.0;
    opts.record_interval = 2.0;
    return run(phi_r, phi_r, iso, 0.5, ness, opts).gtw_to_ness.back();
  };
  const double g1 = terminal_gtw(0.04);
  const double g2 = terminal_gtw(0.02);
  const double g3 = terminal_gtw(0.01);
  const double limit = 2.0 * g3 - g2;  // Richardson estimate of dt -> 0
  CHECK((g1 - limit) / (g2 - limit) == doctest::Approx(2.0).epsilon(0.25));
}
