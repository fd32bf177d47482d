#include "ness/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ness/errors.hpp"
#include "ness/quadrature.hpp"

namespace ness {

namespace {

/// Solve the n x n system A c = b in place (partial pivoting).
template <int N>
std::array<double, N> solve_dense(std::array<std::array<double, N>, N> a,
                                  std::array<double, N> b) {
  for (int col = 0; col < N; ++col) {
    int pivot = col;
    for (int row = col + 1; row < N; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw NumericalError("moment fit: singular normal matrix");
    for (int row = col + 1; row < N; ++row) {
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < N; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (int row = N - 1; row >= 0; --row) {
    double acc = b[row];
    for (int k = row + 1; k < N; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

}  // namespace

MomentSummary moments(const RadialCharFn& phi) {
  const RadialGrid& grid = phi.grid();
  const double h = grid.step();
  // Fit window: small enough that terms beyond r^8 are invisible, wide
  // enough to hold a well-posed 4-parameter fit.
  const double window = std::max(0.15, 8.0 * h);
  std::size_t count = 0;
  while (count + 1 < grid.n && grid.node(count + 1) <= window) ++count;
  if (count < 6) throw NumericalError("moments: too few nodes inside fit window");

  // Basis x^k, k = 1..4, with x = (r/window)^2 for conditioning.
  constexpr int kP = 4;
  std::array<std::array<double, kP>, kP> ata{};
  std::array<double, kP> atb{};
  for (std::size_t i = 1; i <= count; ++i) {
    const double r = grid.node(i);
    const double x = (r / window) * (r / window);
    std::array<double, kP> row;
    row[0] = x;
    for (int k = 1; k < kP; ++k) row[k] = row[k - 1] * x;
    const double y = phi[i] - 1.0;
    for (int a = 0; a < kP; ++a) {
      for (int b = 0; b < kP; ++b) ata[a][b] += row[a] * row[b];
      atb[a] += row[a] * y;
    }
  }
  const auto coef = solve_dense<kP>(ata, atb);

  double max_resid = 0.0;
  for (std::size_t i = 1; i <= count; ++i) {
    const double r = grid.node(i);
    const double x = (r / window) * (r / window);
    double fit = 0.0, xp = x;
    for (int k = 0; k < kP; ++k) {
      fit += coef[k] * xp;
      xp *= x;
    }
    max_resid = std::max(max_resid, std::abs(fit - (phi[i] - 1.0)));
  }
  if (max_resid > 1e-6) {
    throw NumericalError("moments: fit residual " + std::to_string(max_resid) +
                         " exceeds 1e-6; expansion ill-conditioned");
  }

  const double w2 = window * window;
  MomentSummary m;
  m.m2 = -6.0 * coef[0] / w2;
  m.m4 = 120.0 * coef[1] / (w2 * w2);
  return m;
}

double gtw_distance(const RadialCharFn& phi_f, const RadialCharFn& phi_g) {
  if (!phi_f.same_grid(phi_g)) throw ShapeError("gtw_distance: operands on different grids");
  const double m2f = moments(phi_f).m2;
  const double m2g = moments(phi_g).m2;
  if (std::abs(m2f - m2g) > 1e-4) {
    throw MetricDomainError("gtw_distance: second moments differ by " +
                            std::to_string(std::abs(m2f - m2g)) +
                            "; the supremum diverges as r -> 0");
  }
  const RadialGrid& grid = phi_f.grid();
  double best = 0.0;
  for (std::size_t i = 1; i < grid.n; ++i) {
    const double r = grid.node(i);
    best = std::max(best, std::abs(phi_f[i] - phi_g[i]) / (r * r));
  }
  return best;
}

double radial_w2(std::vector<double> speeds_f, std::vector<double> speeds_g) {
  if (speeds_f.empty() || speeds_g.empty()) {
    throw DomainError("radial_w2: empty sample");
  }
  if (speeds_f.size() != speeds_g.size()) {
    throw DomainError("radial_w2: sample sizes must match for the exact quantile formula");
  }
  std::sort(speeds_f.begin(), speeds_f.end());
  std::sort(speeds_g.begin(), speeds_g.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < speeds_f.size(); ++i) {
    const double d = speeds_f[i] - speeds_g[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(speeds_f.size()));
}

namespace {

/// Speed CDF F(v) = 4 pi Int_0^v f u^2 du at every grid node, rescaled to
/// end exactly at 1.
std::vector<double> speed_cdf(const RadialDensity& f) {
  const std::size_t n = f.size();
  const double h = f.step();
  std::vector<double> cdf(n, 0.0);
  double prev = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double v = f.node(i);
    const double cur = f.values()[i] * v * v;
    cdf[i] = cdf[i - 1] + 2.0 * M_PI * h * (prev + cur);
    prev = cur;
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw DomainError("radial_w2: density carries no mass");
  for (double& c : cdf) c /= total;
  return cdf;
}

double quantile(const std::vector<double>& cdf, double h, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
  if (hi == 0) return 0.0;
  if (hi >= cdf.size()) hi = cdf.size() - 1;
  const std::size_t lo = hi - 1;
  const double seg = cdf[hi] - cdf[lo];
  const double frac = seg > 0.0 ? (u - cdf[lo]) / seg : 0.0;
  return h * (static_cast<double>(lo) + frac);
}

}  // namespace

double radial_w2(const RadialDensity& f, const RadialDensity& g) {
  const auto cf = speed_cdf(f);
  const auto cg = speed_cdf(g);
  constexpr std::size_t kPanels = 1 << 14;
  double acc = 0.0;
  for (std::size_t i = 0; i < kPanels; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / kPanels;
    const double d = quantile(cf, f.step(), u) - quantile(cg, g.step(), u);
    acc += d * d;
  }
  return std::sqrt(acc / kPanels);
}

}  // namespace ness
