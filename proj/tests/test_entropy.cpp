#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ness/entropy.hpp"
#include "ness/errors.hpp"
#include "ness/rng.hpp"

using namespace ness;

namespace {

const RadialGrid kGrid{};

/// The jump-reservoir fixed-point map, rebuilt from public pieces so the
/// contraction diagnostics are independent of bgk_ness internals.
RadialCharFn jump_map_oracle(const RadialCharFn& phi, const AngularKernel& kernel,
                             const std::vector<JumpReservoir>& rs) {
  double eta = 0.0;
  for (const auto& r : rs) eta += r.eta;
  const RadialCharFn own = gain(phi, phi, kernel);
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = own[i];
    for (const auto& r : rs) {
      const double r2 = phi.grid().node(i) * phi.grid().node(i);
      acc += r.eta * std::exp(-0.5 * r.temperature * r2);
    }
    out[i] = acc / (1.0 + eta);
  }
  out[0] = 1.0;
  return RadialCharFn(phi.grid(), std::move(out));
}

RadialDensity random_mixture_density(Rng& rng, double v_max, std::size_t m) {
  const double t1 = rng.uniform(0.15, 0.5);
  const double t2 = rng.uniform(0.15, 0.5);
  const double w = rng.uniform(0.2, 0.8);
  std::vector<double> vals(m);
  const double n1 = std::pow(2.0 * M_PI * t1, -1.5);
  const double n2 = std::pow(2.0 * M_PI * t2, -1.5);
  const double h = v_max / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = h * static_cast<double>(i);
    vals[i] = w * n1 * std::exp(-0.5 * v * v / t1) +
              (1.0 - w) * n2 * std::exp(-0.5 * v * v / t2);
  }
  return RadialDensity(v_max, std::move(vals));
}

}  // namespace

TEST_CASE("bgk_ness: single reservoir returns its Maxwellian") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const std::vector<JumpReservoir> rs{{1.5, 0.4}};
  const RadialCharFn ness = bgk_ness(iso, rs, 1e-10);
  CHECK(gtw_distance(ness, charfn_maxwellian(0.4, kGrid)) < 1e-8);
}

TEST_CASE("bgk_ness: two-reservoir energy balance and contraction ratio") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const std::vector<JumpReservoir> rs{{1.0, 0.2}, {1.0, 0.6}};
  const RadialCharFn ness = bgk_ness(iso, rs, 1e-10);
  // Energy balance: Sum eta_a (3 T_a - <v^2>) = 0 gives <v^2> = 3 Tbar = 1.2.
  CHECK(moments(ness).m2 == doctest::Approx(1.2).epsilon(1e-6));

  // Successive distances of the iteration contract at least by 1/(1+eta).
  RadialCharFn prev = charfn_maxwellian(0.4, kGrid);
  RadialCharFn cur = jump_map_oracle(prev, iso, rs);
  double d_prev = gtw_distance(cur, prev);
  for (int n = 0; n < 25 && d_prev > 1e-12; ++n) {
    RadialCharFn next = jump_map_oracle(cur, iso, rs);
    const double d = gtw_distance(next, cur);
    CHECK(d / d_prev <= 1.0 / 3.0 + 1e-6);
    prev = std::move(cur);
    cur = std::move(next);
    d_prev = d;
  }
  // The oracle iteration and bgk_ness land on the same fixed point.
  CHECK(gtw_distance(cur, ness) < 1e-9);
}

TEST_CASE("boltzmann_entropy: Gaussian differential entropy") {
  for (double t : {0.2, 0.4}) {
    const RadialDensity f = maxwellian_density(t, 8.0 * std::sqrt(t), 2048);
    const double expected = 1.5 * std::log(2.0 * M_PI * M_E * t);
    CHECK(boltzmann_entropy(f) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("boltzmann_entropy: strict concavity and temperature scaling") {
  const double t1 = 0.2, t2 = 0.6;
  const double v_max = 8.0 * std::sqrt(t2);
  const std::size_t m = 2048;
  const RadialDensity f1 = maxwellian_density(t1, v_max, m);
  const RadialDensity f2 = maxwellian_density(t2, v_max, m);
  std::vector<double> mix(m);
  for (std::size_t i = 0; i < m; ++i) {
    mix[i] = 0.5 * (f1.values()[i] + f2.values()[i]);
  }
  const RadialDensity fm(v_max, std::move(mix));
  CHECK(boltzmann_entropy(fm) >
        0.5 * boltzmann_entropy(f1) + 0.5 * boltzmann_entropy(f2));

  const RadialDensity g1 = maxwellian_density(0.2, 8.0 * std::sqrt(0.8), 4096);
  const RadialDensity g4 = maxwellian_density(0.8, 8.0 * std::sqrt(0.8), 4096);
  CHECK(boltzmann_entropy(g4) - boltzmann_entropy(g1) ==
        doctest::Approx(1.5 * std::log(4.0)).epsilon(1e-6));
}

TEST_CASE("density constructor rejects unnormalized values") {
  std::vector<double> vals(256, 1.0);
  CHECK_THROWS_AS(RadialDensity(4.0, vals), NumericalError);
}

TEST_CASE("sigma_alpha: zero at the reservoir Maxwellian, positive elsewhere") {
  const JumpReservoir res{1.0, 0.3};
  const RadialDensity fm = maxwellian_density(0.3, 8.0 * std::sqrt(0.3), 1024);
  CHECK(std::abs(sigma_alpha(fm, res)) < 1e-10);

  Rng rng(41);
  for (int i = 0; i < 12; ++i) {
    const RadialDensity f = random_mixture_density(rng, 6.0, 1024);
    CHECK(sigma_alpha(f, res) >= -1e-8);
    // f differs from M_{0.3} unless the draw degenerates; demand positivity
    // when the second moment visibly disagrees.
    if (std::abs(f.second_moment() - 0.9) > 1e-3) {
      CHECK(sigma_alpha(f, res) > 0.0);
    }
  }
}

TEST_CASE("flux_alpha: closed form, quadrature route, equilibrium zero") {
  const JumpReservoir res{1.0, 0.2};
  // <v^2> = 1.2 gives J = (1/2)(1.2 - 0.6) = 0.3.
  CHECK(flux_alpha(MomentSummary{1.2, 0.0}, res) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(flux_alpha(MomentSummary{3.0 * 0.2, 0.0}, res) == 0.0);

  // Dual route: 2-D quadrature agrees with the closed form within 1e-6.
  Rng rng(43);
  for (int i = 0; i < 6; ++i) {
    const RadialDensity f = random_mixture_density(rng, 7.0, 1024);
    const double closed = flux_alpha(MomentSummary{f.second_moment(), 0.0}, res);
    CHECK(std::abs(flux_alpha(f, res) - closed) < 1e-6);
  }
}

TEST_CASE("ledger: equilibrium with a single reservoir vanishes") {
  const std::vector<JumpReservoir> rs{{1.0, 0.4}};
  const RadialDensity f = maxwellian_density(0.4, 8.0 * std::sqrt(0.4), 1024);
  const EntropyLedger row = ledger(f, f, 0.1, rs);
  CHECK(row.S_dot == 0.0);
  CHECK(std::abs(row.J_alpha[0]) < 1e-8);
  CHECK(std::abs(row.sigma_alpha[0]) < 1e-8);
  CHECK(std::abs(row.sigma_total) < 1e-8);
  CHECK(std::abs(row.sigma_B_residual) < 1e-8);
  CHECK_THROWS_AS(ledger(f, f, 0.0, rs), DomainError);
}

TEST_CASE("ledger: hot-to-cold flux at the two-reservoir NESS") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const std::vector<JumpReservoir> rs{{1.0, 0.2}, {1.0, 0.6}};
  const RadialCharFn phi = bgk_ness(iso, rs, 1e-10);
  const RadialDensity f = inverse_transform(phi, 8.0 * std::sqrt(0.6), 1024);
  const EntropyLedger row = ledger(f, f, 1.0, rs);
  CHECK(std::abs(row.J_alpha[0] - 0.3) < 1e-6);  // energy flows into the cold bath
  CHECK(std::abs(row.J_alpha[0] + row.J_alpha[1]) < 1e-6);
  const double hotcold = (rs[0].beta() - rs[1].beta()) * row.J_alpha[0];
  CHECK(std::abs(row.sigma_total - hotcold) < 1e-6);
  CHECK(row.sigma_total > 0.0);
  CHECK(row.sigma_alpha[0] >= 0.0);
  CHECK(row.sigma_alpha[1] >= 0.0);
  CHECK(row.sigma_B_residual >= -1e-4);
}

TEST_CASE("equal-temperature reservoirs: sigma equals the free-energy descent") {
  // sigma = -d/dt RelEnt(f | M_T) along a relaxing trajectory (1% check).
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const double temp = 0.4;
  const std::vector<JumpReservoir> rs{{1.0, temp}};
  const double v_max = 8.0;
  const std::size_t m = 1024;

  const auto rel_ent = [&](const RadialDensity& f) {
    return -boltzmann_entropy(f) + 1.5 * std::log(2.0 * M_PI * temp) +
           f.second_moment() / (2.0 * temp);
  };

  RadialCharFn phi = charfn_maxwellian(1.0, kGrid);
  const double interval = 0.05;
  std::vector<RadialDensity> snaps;
  snaps.push_back(inverse_transform(phi, v_max, m));
  for (int k = 0; k < 30; ++k) {
    for (int s = 0; s < 5; ++s) phi = thermal_step(phi, iso, rs, 0.01);
    snaps.push_back(inverse_transform(phi, v_max, m));
  }
  // Compare away from the start so the observables are smooth in t.
  for (std::size_t k = 4; k + 1 < snaps.size(); k += 5) {
    const EntropyLedger row = ledger(snaps[k + 1], snaps[k], interval, rs);
    const double descent = -(rel_ent(snaps[k + 1]) - rel_ent(snaps[k])) / interval;
    CHECK(row.sigma_total == doctest::Approx(descent).epsilon(0.01));
    CHECK(row.sigma_total > 0.0);
  }
}

TEST_CASE("thermal_step: stationary at the computed NESS") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const std::vector<JumpReservoir> rs{{1.0, 0.2}, {1.0, 0.6}};
  const RadialCharFn ness = bgk_ness(iso, rs, 1e-10);
  const RadialCharFn stepped = thermal_step(ness, iso, rs, 0.02);
  double worst = 0.0;
  for (std::size_t i = 0; i < ness.size(); ++i) {
    worst = std::max(worst, std::abs(stepped[i] - ness[i]));
  }
  CHECK(worst < 1e-8);
}
