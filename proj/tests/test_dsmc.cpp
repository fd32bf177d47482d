#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ness/dsmc.hpp"
#include "ness/errors.hpp"
#include "ness/evolve.hpp"

using namespace ness;

namespace {

double ks_against_normal(std::vector<double> xs, double sigma) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-xs[i] / (sigma * std::sqrt(2.0)));
    d = std::max(d, std::abs((i + 1.0) / n - cdf));
    d = std::max(d, std::abs(cdf - i / n));
  }
  return d;
}

}  // namespace

TEST_CASE("post_collision: displayed example and grazing identity") {
  const Vec3 v{1.0, 0.0, 0.0}, vs{-1.0, 0.0, 0.0};
  const auto [vp, vsp] = post_collision(v, vs, Vec3{0.0, 1.0, 0.0});
  CHECK(vp == Vec3{0.0, 1.0, 0.0});
  CHECK(vsp == Vec3{0.0, -1.0, 0.0});

  // sigma along the relative velocity leaves both particles unchanged.
  const auto [gp, gsp] = post_collision(v, vs, Vec3{1.0, 0.0, 0.0});
  CHECK(gp == v);
  CHECK(gsp == vs);

  CHECK_THROWS_AS(post_collision(v, vs, Vec3{0.0, 0.5, 0.0}), DomainError);
}

TEST_CASE("post_collision conserves momentum and energy per event") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec3 v = rng.maxwellian_velocity(0.7);
    const Vec3 vs = rng.maxwellian_velocity(0.2);
    const double c = rng.uniform(-1.0, 1.0);
    const double psi = rng.uniform(0.0, 2.0 * M_PI);
    const double s = std::sqrt(1.0 - c * c);
    const Vec3 sigma{c, s * std::cos(psi), s * std::sin(psi)};
    const auto [vp, vsp] = post_collision(v, vs, sigma);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(vp[k] + vsp[k] - v[k] - vs[k]) < 1e-13);
    }
    const double before = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + vs[0] * vs[0] +
                          vs[1] * vs[1] + vs[2] * vs[2];
    const double after = vp[0] * vp[0] + vp[1] * vp[1] + vp[2] * vp[2] + vsp[0] * vsp[0] +
                         vsp[1] * vsp[1] + vsp[2] * vsp[2];
    CHECK(std::abs(after - before) < 1e-12);
  }
}

TEST_CASE("reduce_ou_reservoirs") {
  const OuReservoir single = reduce_ou_reservoirs({{1.0, 0.5}});
  CHECK(single.eta == 1.0);
  CHECK(single.temperature == 0.5);

  const OuReservoir pair = reduce_ou_reservoirs({{1.0, 0.2}, {1.0, 0.6}});
  CHECK(pair.eta == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pair.temperature == doctest::Approx(0.4).epsilon(1e-15));

  const OuReservoir same_t = reduce_ou_reservoirs({{2.0, 0.3}, {3.0, 0.3}});
  CHECK(same_t.eta == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(same_t.temperature == doctest::Approx(0.3).epsilon(1e-15));

  CHECK_THROWS_AS(reduce_ou_reservoirs({}), ConfigError);
  CHECK_THROWS_AS(reduce_ou_reservoirs({{-1.0, 0.5}}), ConfigError);
}

TEST_CASE("collide_step: equilibrium is statistically stationary") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  // R = M_{1/3} makes M_{1/3} stationary for every admissible gamma.
  const MixtureReservoir res{{1.0}, {1.0 / 3.0}, 0.9};
  const std::size_t n = 20000;
  std::vector<double> terminal_m2;
  for (std::uint64_t rep = 0; rep < 6; ++rep) {
    ParticleEnsemble ens(n, 500 + rep);
    ens.initialize_maxwellian(1.0 / 3.0);
    for (int s = 0; s < 500; ++s) collide_step(ens, iso, res, 0.02);
    terminal_m2.push_back(ens.mean_square_speed());
  }
  double mean = 0.0;
  for (double x : terminal_m2) mean += x;
  mean /= terminal_m2.size();
  double var = 0.0;
  for (double x : terminal_m2) var += (x - mean) * (x - mean);
  var /= terminal_m2.size() - 1;
  const double se = std::sqrt(var / terminal_m2.size());
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("collide_step: first-moment and energy relaxation rates") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const MixtureReservoir res{{0.5, 0.5}, {0.2, 7.0 / 15.0}, 0.5};
  const double rate = iso.moment_decay_rate(0.5);  // 0.25
  const std::size_t n = 40000;
  const int steps = 600;  // t = 12
  std::vector<double> times, v1, edev;
  ParticleEnsemble ens(n, 73);
  ens.initialize_maxwellian(1.0 / 3.0, {1.0, 0.0, 0.0});
  for (int s = 0; s <= steps; ++s) {
    if (s % 10 == 0) {
      times.push_back(ens.time);
      v1.push_back(std::abs(ens.mean_velocity()[0]));
      edev.push_back(std::abs(ens.mean_square_speed() - 1.0));
    }
    if (s < steps) collide_step(ens, iso, res, 0.02);
  }
  std::size_t used = 0;
  const double slope_v1 = fit_log_slope(times, v1, 5e-2, 2.0, &used);
  CHECK(used >= 5);
  CHECK(std::abs(-slope_v1 - rate) <= 0.10 * rate);
  // Energy starts at 1 + |u|^2 = 2 and relaxes at the same rate.
  const double slope_e = fit_log_slope(times, edev, 5e-2, 2.0, &used);
  CHECK(used >= 5);
  CHECK(std::abs(-slope_e - rate) <= 0.10 * rate);
}

TEST_CASE("internal collisions conserve momentum and energy exactly") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  ParticleEnsemble ens(5000, 7);
  ens.initialize_maxwellian(0.5, {0.3, -0.2, 0.1});
  const Vec3 p0 = ens.mean_velocity();
  const double e0 = ens.mean_square_speed();
  for (int s = 0; s < 400; ++s) collide_step_internal(ens, iso, 0.05);
  const Vec3 p1 = ens.mean_velocity();
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(p1[k] - p0[k]) < 1e-10);
  CHECK(std::abs(ens.mean_square_speed() - e0) < 1e-9);
}

TEST_CASE("ou_step: exact transition moments") {
  const double eta = 1.3, temp = 0.5, dt = 0.05;
  ParticleEnsemble ens(100000, 11);
  ens.initialize_maxwellian(0.2, {1.0, 0.0, 0.0});
  const Vec3 before = ens.mean_velocity();
  ou_step(ens, eta, temp, dt);
  const Vec3 after = ens.mean_velocity();
  const double shrink = std::exp(-eta * dt);
  // <v> contracts by exp(-eta dt); noise level sqrt(T (1-e^2)/N).
  const double se = std::sqrt(temp * (1.0 - shrink * shrink) / 100000.0);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(after[k] - shrink * before[k]) <= 3.0 * se);
  }
}

TEST_CASE("ou_step: energy gap decays as exp(-2 eta t)") {
  const double eta = 1.0, temp = 0.5;
  std::vector<double> gaps;
  const double t_end = 1.0, dt = 0.02;
  for (std::uint64_t rep = 0; rep < 6; ++rep) {
    ParticleEnsemble ens(50000, 900 + rep);
    ens.initialize_maxwellian(0.1);
    for (int s = 0; s < 50; ++s) ou_step(ens, eta, temp, dt);
    gaps.push_back(3.0 * temp - ens.mean_square_speed());
  }
  double mean = 0.0;
  for (double g : gaps) mean += g;
  mean /= gaps.size();
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= gaps.size() - 1;
  const double se = std::sqrt(var / gaps.size());
  const double expected = (3.0 * temp - 3.0 * 0.1) * std::exp(-2.0 * eta * t_end);
  CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("ou_step: Maxwellian is stationary (componentwise KS at 1%)") {
  const double temp = 0.4;
  ParticleEnsemble ens(100000, 13);
  ens.initialize_maxwellian(temp);
  for (int s = 0; s < 20; ++s) ou_step(ens, 2.0, temp, 0.05);
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double> comp(ens.velocities.size());
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = ens.velocities[i][k];
    // Kolmogorov critical value at alpha = 0.01.
    CHECK(ks_against_normal(std::move(comp), std::sqrt(temp)) <
          1.628 / std::sqrt(100000.0));
  }
}

TEST_CASE("ou_step: two half steps match one full step in distribution") {
  const double eta = 1.5, temp = 0.3, dt = 0.04;
  ParticleEnsemble full(100000, 17);
  ParticleEnsemble halves(100000, 18);
  full.initialize_maxwellian(0.8);
  halves.initialize_maxwellian(0.8);
  ou_step(full, eta, temp, dt);
  ou_step(halves, eta, temp, dt / 2.0);
  ou_step(halves, eta, temp, dt / 2.0);
  // Exact transition kernel: same first and second moments after either path.
  const double se2 = std::sqrt(2.0 * (3.0 * 0.8 * 0.8 * 2.0) / 100000.0);
  CHECK(std::abs(full.mean_square_speed() - halves.mean_square_speed()) <= 3.0 * se2);
}

TEST_CASE("fixed seed reproduces trajectories bitwise") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const MixtureReservoir res{{0.5, 0.5}, {0.2, 7.0 / 15.0}, 0.5};
  ParticleEnsemble a(1000, 99), b(1000, 99);
  a.initialize_maxwellian(1.0 / 3.0);
  b.initialize_maxwellian(1.0 / 3.0);
  for (int s = 0; s < 100; ++s) {
    collide_step(a, iso, res, 0.02);
    collide_step(b, iso, res, 0.02);
  }
  CHECK(a.velocities == b.velocities);
}

TEST_CASE("run_dsmc: validation, determinism and snapshots") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  DsmcConfig cfg;
  cfg.n_particles = 2000;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  cfg.record_interval = 0.5;
  cfg.seed = 3;
  cfg.replicas = 2;
  cfg.kernel = &iso;
  CHECK_THROWS_AS(run_dsmc(cfg), ConfigError);  // no reservoir chosen

  cfg.mixture = MixtureReservoir{{0.5, 0.5}, {0.2, 7.0 / 15.0}, 0.5};
  cfg.snapshot_times = {0.5};
  const DsmcResult r1 = run_dsmc(cfg);
  const DsmcResult r2 = run_dsmc(cfg);
  REQUIRE(r1.replicas.size() == 2);
  CHECK(r1.replicas[0].m2 == r2.replicas[0].m2);
  CHECK(r1.replicas[1].m4 == r2.replicas[1].m4);
  REQUIRE(r1.replicas[0].speed_snapshots.size() == 1);
  const auto& speeds = r1.replicas[0].speed_snapshots[0].second;
  CHECK(std::is_sorted(speeds.begin(), speeds.end()));

  cfg.ou = std::vector<OuReservoir>{{1.0, 0.4}};
  CHECK_THROWS_AS(run_dsmc(cfg), ConfigError);  // both reservoir kinds set
}

TEST_CASE("collide_step precondition checks") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  ParticleEnsemble ens(100, 1);
  ens.initialize_maxwellian(0.3);
  const MixtureReservoir res{{1.0}, {0.3}, 0.5};
  CHECK_THROWS_AS(collide_step(ens, iso, res, 0.2), DomainError);
  const MixtureReservoir bad_gamma{{1.0}, {0.3}, 1.0};
  CHECK_THROWS_AS(collide_step(ens, iso, bad_gamma, 0.02), DomainError);
}
