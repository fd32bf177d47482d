#include "ness/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ness/errors.hpp"
#include "ness/quadrature.hpp"

namespace ness {

namespace {

/// First-derivative weights at x0 over five arbitrary nodes (Fornberg).
void fornberg_d1(const double* xs, double x0, double* w) {
  constexpr int kN = 5;
  double d[2][kN] = {};
  d[0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i < kN; ++i) {
    double c2 = 1.0;
    const double prev0 = d[0][i - 1];
    const double prev1 = d[1][i - 1];
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      d[1][j] = ((xs[i] - x0) * d[1][j] - d[0][j]) / c3;
      d[0][j] = ((xs[i] - x0) * d[0][j]) / c3;
    }
    d[1][i] = (c1 / c2) * (prev0 - (xs[i - 1] - x0) * prev1);
    d[0][i] = -(c1 / c2) * (xs[i - 1] - x0) * prev0;
    c1 = c2;
  }
  for (int i = 0; i < kN; ++i) w[i] = d[1][i];
}

/// d psi / d x at every node of the squared-radius grid x_i = (i*h)^2.
std::vector<double> squared_grid_slopes(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = h * static_cast<double>(i);
    xs[i] = r * r;
  }
  std::vector<double> slopes(n);
  double w[5];
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = (i >= 2) ? i - 2 : 0;
    lo = std::min(lo, n - 5);
    fornberg_d1(&xs[lo], xs[i], w);
    double acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += w[j] * y[lo + j];
    slopes[i] = acc;
  }
  return slopes;
}

double hermite_eval(double x, double x_lo, double x_hi, double y_lo, double y_hi,
                    double d_lo, double d_hi) {
  const double dx = x_hi - x_lo;
  const double t = (x - x_lo) / dx;
  const double omt = 1.0 - t;
  const double h00 = (1.0 + 2.0 * t) * omt * omt;
  const double h10 = t * omt * omt;
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = t * t * (t - 1.0);
  return h00 * y_lo + h10 * dx * d_lo + h01 * y_hi + h11 * dx * d_hi;
}

}  // namespace

RadialCharFn::RadialCharFn(RadialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (grid_.n < 16) throw DomainError("RadialCharFn: grid needs at least 16 nodes");
  if (!(grid_.r_max > 0.0)) throw DomainError("RadialCharFn: r_max must be positive");
  if (values_.size() != grid_.n) {
    throw ShapeError("RadialCharFn: value count does not match grid");
  }
  if (values_[0] != 1.0) {
    // phi(0) = 1 is the probability normalization; tiny quadrature residue
    // is snapped, anything larger is a real defect.
    if (std::abs(values_[0] - 1.0) > 1e-12) {
      throw NumericalError("RadialCharFn: phi(0) must equal 1, got " +
                           std::to_string(values_[0]));
    }
    values_[0] = 1.0;
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericalError("RadialCharFn: non-finite value");
    if (std::abs(v) > 1.0 + 1e-9) {
      throw NumericalError("RadialCharFn: |phi| exceeds 1 beyond tolerance");
    }
  }
  slopes_ = squared_grid_slopes(values_, grid_.step());
}

double RadialCharFn::interpolate(double r) const {
  if (r < 0.0 || r > grid_.r_max * (1.0 + 1e-12)) {
    throw std::out_of_range("RadialCharFn::interpolate: radius outside [0, r_max]");
  }
  const double h = grid_.step();
  const double pos = std::min(r / h, static_cast<double>(grid_.n - 1));
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= grid_.n - 1) i = grid_.n - 2;
  const double r_lo = h * static_cast<double>(i);
  const double r_hi = r_lo + h;
  return hermite_eval(r * r, r_lo * r_lo, r_hi * r_hi, values_[i], values_[i + 1],
                      slopes_[i], slopes_[i + 1]);
}

RadialDensity::RadialDensity(double v_max, std::vector<double> values)
    : v_max_(v_max), values_(std::move(values)) {
  if (!(v_max_ > 0.0)) throw DomainError("RadialDensity: v_max must be positive");
  if (values_.size() < 16) throw DomainError("RadialDensity: need at least 16 nodes");
  for (double& v : values_) {
    if (!std::isfinite(v)) throw NumericalError("RadialDensity: non-finite value");
    if (v < -1e-10) {
      throw NumericalError("RadialDensity: negative density beyond clip tolerance");
    }
    v = std::max(v, 0.0);
  }
  const double total = mass();
  if (std::abs(total - 1.0) > 1e-6) {
    throw NumericalError("RadialDensity: mass " + std::to_string(total) +
                         " deviates from 1 beyond 1e-6");
  }
  slopes_ = squared_grid_slopes(values_, step());
}

double RadialDensity::interpolate(double v) const {
  if (v < 0.0 || v > v_max_ * (1.0 + 1e-12)) {
    throw std::out_of_range("RadialDensity::interpolate: speed outside [0, v_max]");
  }
  const double h = step();
  const std::size_t n = values_.size();
  const double pos = std::min(v / h, static_cast<double>(n - 1));
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= n - 1) i = n - 2;
  const double v_lo = h * static_cast<double>(i);
  const double v_hi = v_lo + h;
  const double y = hermite_eval(v * v, v_lo * v_lo, v_hi * v_hi, values_[i],
                                values_[i + 1], slopes_[i], slopes_[i + 1]);
  return std::max(y, 0.0);
}

double RadialDensity::mass() const {
  std::vector<double> integrand(values_.size());
  const double h = step();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = h * static_cast<double>(i);
    integrand[i] = values_[i] * v * v;
  }
  return 4.0 * M_PI * integrate_uniform(integrand, h);
}

double RadialDensity::second_moment() const {
  std::vector<double> integrand(values_.size());
  const double h = step();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = h * static_cast<double>(i);
    integrand[i] = values_[i] * v * v * v * v;
  }
  return 4.0 * M_PI * integrate_uniform(integrand, h);
}

RadialCharFn charfn_maxwellian(double temperature, const RadialGrid& grid) {
  if (!(temperature > 0.0)) {
    throw DomainError("charfn_maxwellian: temperature must be positive");
  }
  std::vector<double> vals(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double r2 = grid.node(i) * grid.node(i);
    vals[i] = std::exp(-0.5 * temperature * r2);
  }
  return RadialCharFn(grid, std::move(vals));
}

RadialCharFn charfn_mixture(const std::vector<double>& weights,
                            const std::vector<double>& temps, const RadialGrid& grid) {
  if (weights.empty() || weights.size() != temps.size()) {
    throw ConfigError("charfn_mixture: weights and temps must be nonempty and equal length");
  }
  double wsum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw ConfigError("charfn_mixture: weights must be positive");
    if (!(temps[i] > 0.0)) throw ConfigError("charfn_mixture: temps must be positive");
    wsum += weights[i];
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw ConfigError("charfn_mixture: weights must sum to 1 within 1e-12");
  }
  std::vector<double> vals(grid.n, 0.0);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double r2 = grid.node(i) * grid.node(i);
    double acc = 0.0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
      acc += weights[c] * std::exp(-0.5 * temps[c] * r2);
    }
    vals[i] = acc;
  }
  vals[0] = 1.0;
  return RadialCharFn(grid, std::move(vals));
}

RadialCharFn gain(const RadialCharFn& phi_f, const RadialCharFn& phi_g,
                  const AngularKernel& kernel) {
  if (!phi_f.same_grid(phi_g)) throw ShapeError("gain: operands on different grids");
  const RadialGrid& grid = phi_f.grid();
  const auto& quad = kernel.quad();
  const std::size_t q = quad.size();

  // Per-quadrature-node constants: half-weighted b and the two radius factors.
  std::vector<double> bw(q), sp(q), sm(q);
  for (std::size_t j = 0; j < q; ++j) {
    bw[j] = 0.5 * quad[j].w * kernel(quad[j].x);
    sp[j] = std::sqrt(0.5 * (1.0 + quad[j].x));
    sm[j] = std::sqrt(0.5 * (1.0 - quad[j].x));
  }

  std::vector<double> out(grid.n);
  out[0] = 1.0;
  for (std::size_t i = 1; i < grid.n; ++i) {
    const double r = grid.node(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
      acc += bw[j] * phi_f.interpolate(r * sp[j]) * phi_g.interpolate(r * sm[j]);
    }
    out[i] = acc;
  }
  return RadialCharFn(grid, std::move(out));
}

RadialCharFn phi_map(const RadialCharFn& phi_f, const RadialCharFn& phi_r,
                     const AngularKernel& kernel, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("phi_map: gamma must lie in (0,1)");
  if (!phi_f.same_grid(phi_r)) throw ShapeError("phi_map: operands on different grids");
  const RadialCharFn own = gain(phi_f, phi_f, kernel);
  const RadialCharFn res = gain(phi_f, phi_r, kernel);
  std::vector<double> out(own.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - gamma) * own[i] + gamma * res[i];
  }
  out[0] = 1.0;
  return RadialCharFn(phi_f.grid(), std::move(out));
}

RadialDensity inverse_transform(const RadialCharFn& phi, double v_max, std::size_t m) {
  if (!(v_max > 0.0) || m < 16) {
    throw DomainError("inverse_transform: need v_max > 0 and m >= 16");
  }
  // Truncating the r-integral at r_max is only valid once phi has decayed.
  const std::size_t tail_start = phi.size() - std::max<std::size_t>(phi.size() / 20, 2);
  double tail = 0.0;
  for (std::size_t i = tail_start; i < phi.size(); ++i) {
    tail = std::max(tail, std::abs(phi[i]));
  }
  if (tail > 1e-10) {
    throw TruncationError("inverse_transform: |phi| = " + std::to_string(tail) +
                          " near r_max; transform would be truncated");
  }

  const RadialGrid& grid = phi.grid();
  const double h = grid.step();
  std::vector<double> out(m);
  std::vector<double> integrand(grid.n);
  for (std::size_t k = 0; k < m; ++k) {
    const double v = v_max * static_cast<double>(k) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double r = grid.node(i);
      const double rv = r * v;
      const double sinc = rv < 1e-8 ? 1.0 - rv * rv / 6.0 : std::sin(rv) / rv;
      integrand[i] = r * r * phi[i] * sinc;
    }
    out[k] = integrate_uniform(integrand, h) / (2.0 * M_PI * M_PI);
  }
  for (double& f : out) f = std::max(f, 0.0);

  // Mass check before renormalization.
  const double hv = v_max / static_cast<double>(m - 1);
  std::vector<double> massint(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double v = hv * static_cast<double>(k);
    massint[k] = out[k] * v * v;
  }
  const double total = 4.0 * M_PI * integrate_uniform(massint, hv);
  if (std::abs(total - 1.0) > 1e-6) {
    throw TruncationError("inverse_transform: recovered mass " + std::to_string(total) +
                          "; grid does not resolve the density");
  }
  for (double& f : out) f /= total;
  return RadialDensity(v_max, std::move(out));
}

RadialDensity maxwellian_density(double temperature, double v_max, std::size_t m) {
  if (!(temperature > 0.0)) {
    throw DomainError("maxwellian_density: temperature must be positive");
  }
  std::vector<double> vals(m);
  const double norm = std::pow(2.0 * M_PI * temperature, -1.5);
  const double hv = v_max / static_cast<double>(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    const double v = hv * static_cast<double>(k);
    vals[k] = norm * std::exp(-0.5 * v * v / temperature);
  }
  // Normalize on the grid so the constructor's mass gate holds even when
  // v_max clips a visible tail fraction.
  std::vector<double> massint(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double v = hv * static_cast<double>(k);
    massint[k] = vals[k] * v * v;
  }
  const double total = 4.0 * M_PI * integrate_uniform(massint, hv);
  for (double& f : vals) f /= total;
  return RadialDensity(v_max, std::move(vals));
}

}  // namespace ness
