#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ness/errors.hpp"
#include "ness/metrics.hpp"
#include "ness/rng.hpp"
#include "ness/spectral.hpp"

using namespace ness;

namespace {

const RadialGrid kGrid{};

RadialCharFn random_unit_energy_mixture(Rng& rng, const RadialGrid& grid) {
  const std::size_t k = 2 + rng.integer(3);
  std::vector<double> w(k), t(k);
  double wsum = 0.0;
  for (auto& wi : w) {
    wi = rng.uniform(0.2, 1.0);
    wsum += wi;
  }
  for (auto& wi : w) wi /= wsum;
  double fix = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) fix += w[i];
  w[k - 1] = 1.0 - fix;
  double wt = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    t[i] = rng.uniform(0.05, 1.0);
    wt += w[i] * t[i];
  }
  for (auto& ti : t) ti /= 3.0 * wt;
  return charfn_mixture(w, t, grid);
}

std::vector<double> chi3_speeds(Rng& rng, double temperature, std::size_t n) {
  std::vector<double> out(n);
  const double s = std::sqrt(temperature);
  for (auto& x : out) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    x = s * std::sqrt(a * a + b * b + c * c);
  }
  return out;
}

}  // namespace

TEST_CASE("moments of Maxwellians: m2 = 3T, m4 = 15 T^2") {
  for (double t : {0.2, 1.0 / 3.0, 7.0 / 15.0, 0.5, 1.0}) {
    const MomentSummary m = moments(charfn_maxwellian(t, kGrid));
    CHECK(std::abs(m.m2 - 3.0 * t) < 1e-7);
    CHECK(std::abs(m.m4 - 15.0 * t * t) < 1e-5);
  }
}

TEST_CASE("moments of the normalized mixture") {
  const MomentSummary m = moments(charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid));
  CHECK(std::abs(m.m2 - 1.0) < 1e-6);
  // m4 of a mixture is the weighted average of the component m4's.
  const double m4 = 0.5 * 15.0 * 0.04 + 0.5 * 15.0 * (7.0 / 15.0) * (7.0 / 15.0);
  CHECK(std::abs(m.m4 - m4) < 1e-5);
}

TEST_CASE("moments satisfy the Cauchy-Schwarz bound on random mixtures") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const MomentSummary m = moments(random_unit_energy_mixture(rng, kGrid));
    CHECK(m.m2 > 0.0);
    CHECK(m.m4 >= m.m2 * m.m2 - 1e-6);
  }
}

TEST_CASE("gtw_distance: zero on equal inputs, symmetric, triangle inequality") {
  Rng rng(17);
  const RadialCharFn f = random_unit_energy_mixture(rng, kGrid);
  const RadialCharFn g = random_unit_energy_mixture(rng, kGrid);
  const RadialCharFn h = random_unit_energy_mixture(rng, kGrid);
  CHECK(gtw_distance(f, f) == 0.0);
  CHECK(gtw_distance(f, g) == gtw_distance(g, f));
  CHECK(gtw_distance(f, h) <= gtw_distance(f, g) + gtw_distance(g, h) + 1e-15);
  CHECK(gtw_distance(f, g) > 0.0);
}

TEST_CASE("gtw_distance agrees with a dense scan of the analytic expression") {
  const RadialCharFn m13 = charfn_maxwellian(1.0 / 3.0, kGrid);
  const RadialCharFn mix = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  const double on_grid = gtw_distance(m13, mix);

  // Independent oracle: 1-D maximization of the closed-form integrand on a
  // 10x finer radius set.
  double fine = 0.0;
  const std::size_t n = 10 * (kGrid.n - 1) + 1;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = kGrid.r_max * static_cast<double>(i) / static_cast<double>(n - 1);
    const double r2 = r * r;
    const double val = std::abs(0.5 * std::exp(-0.1 * r2) +
                                0.5 * std::exp(-(7.0 / 30.0) * r2) - std::exp(-r2 / 6.0)) /
                       r2;
    fine = std::max(fine, val);
  }
  CHECK(on_grid > 0.0);
  CHECK(std::abs(on_grid - fine) / fine < 5e-4);  // 3 significant digits
}

TEST_CASE("gtw_distance refuses moment-mismatched pairs") {
  const RadialCharFn a = charfn_maxwellian(1.0 / 3.0, kGrid);
  const RadialCharFn b = charfn_maxwellian(0.5, kGrid);
  CHECK_THROWS_AS(gtw_distance(a, b), MetricDomainError);
}

TEST_CASE("gtw_distance refinement: nested grids never lose the supremum") {
  const RadialGrid coarse{1025, 16.0};
  const RadialGrid fine{2049, 16.0};  // nodes of `coarse` are a subset
  const auto build = [](const RadialGrid& g) {
    return std::pair{charfn_maxwellian(1.0 / 3.0, g),
                     charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, g)};
  };
  const auto [fc, gc] = build(coarse);
  const auto [ff, gf] = build(fine);
  const double dc = gtw_distance(fc, gc);
  const double df = gtw_distance(ff, gf);
  CHECK(df >= dc - 1e-15);
  CHECK(df - dc < 1e-6);
}

TEST_CASE("gtw contraction ratio under the fixed-point map") {
  const AngularKernel iso = make_kernel(AngularKernel::Kind::Isotropic);
  const RadialCharFn phi_r = charfn_mixture({0.5, 0.5}, {0.2, 7.0 / 15.0}, kGrid);
  const double lambda = iso.contraction_factor(0.5);
  Rng rng(23);
  for (int pair = 0; pair < 8; ++pair) {
    const RadialCharFn f = random_unit_energy_mixture(rng, kGrid);
    const RadialCharFn g = random_unit_energy_mixture(rng, kGrid);
    const double d0 = gtw_distance(f, g);
    if (d0 < 1e-10) continue;
    const double d1 =
        gtw_distance(phi_map(f, phi_r, iso, 0.5), phi_map(g, phi_r, iso, 0.5));
    CHECK(d1 / d0 <= lambda + 1e-6);
  }
}

TEST_CASE("radial_w2 on samples: identity, shuffle, Gaussian closed form") {
  Rng rng(29);
  auto sample = chi3_speeds(rng, 0.5, 20000);
  auto shuffled = sample;
  for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
    std::swap(shuffled[i], shuffled[rng.integer(i + 1)]);
  }
  CHECK(radial_w2(sample, shuffled) == 0.0);

  const double ta = 1.0 / 3.0, tb = 2.0 / 3.0;
  const double w2 = radial_w2(chi3_speeds(rng, ta, 400000), chi3_speeds(rng, tb, 400000));
  const double truth = std::sqrt(3.0) * std::abs(std::sqrt(ta) - std::sqrt(tb));
  CHECK(std::abs(w2 - truth) / truth < 0.02);

  CHECK_THROWS_AS(radial_w2(std::vector<double>{}, std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(radial_w2(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                  DomainError);
}

TEST_CASE("radial_w2 on densities matches the Gaussian formula") {
  const double ta = 0.3, tb = 0.6;
  const RadialDensity fa = maxwellian_density(ta, 8.0, 2048);
  const RadialDensity fb = maxwellian_density(tb, 8.0, 2048);
  const double truth = std::sqrt(3.0) * std::abs(std::sqrt(ta) - std::sqrt(tb));
  CHECK(std::abs(radial_w2(fa, fb) - truth) / truth < 0.01);
  CHECK(radial_w2(fa, fa) == 0.0);
}

TEST_CASE("radial_w2 triangle inequality on random samples") {
  Rng rng(31);
  const auto a = chi3_speeds(rng, 0.2, 5000);
  const auto b = chi3_speeds(rng, 0.5, 5000);
  const auto c = chi3_speeds(rng, 1.0, 5000);
  CHECK(radial_w2(a, c) <= radial_w2(a, b) + radial_w2(b, c) + 1e-12);
}
