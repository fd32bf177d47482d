#ifndef NESS_SPECTRAL_HPP
#define NESS_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "ness/angular_kernel.hpp"

namespace ness {

/// Uniform radial grid r_i = i * r_max / (n-1), i = 0..n-1.
struct RadialGrid {
  std::size_t n = 2048;
  double r_max = 16.0;

  double step() const { return r_max / static_cast<double>(n - 1); }
  double node(std::size_t i) const { return step() * static_cast<double>(i); }
  bool operator==(const RadialGrid&) const = default;
};

/// Radial characteristic function phi(r) = fhat(|xi|) of an isotropic
/// probability law on R^3, sampled on a uniform r-grid.
///
/// Isotropic characteristic functions are real, even and analytic in
/// r^2, so off-grid evaluation interpolates psi(x) = phi(sqrt(x)) in the
/// squared radius x = r^2 (cubic Hermite, 5-point finite-difference
/// slopes). Working in x keeps the interpolation error o(r^2) near the
/// origin, which the 1/r^2-weighted GTW metric requires.
class RadialCharFn {
 public:
  RadialCharFn(RadialGrid grid, std::vector<double> values);

  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Cubic Hermite evaluation at radius r in [0, r_max]; exact at nodes,
  /// returns 1 at r = 0. Radii outside the grid raise std::out_of_range.
  double interpolate(double r) const;

  bool same_grid(const RadialCharFn& other) const { return grid_ == other.grid_; }

 private:
  RadialGrid grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;  // d psi / d x at the grid nodes
};

/// Isotropic velocity-space density f(|v|) on a uniform speed grid,
/// normalized so that 4*pi Int f(v) v^2 dv = 1.
class RadialDensity {
 public:
  RadialDensity(double v_max, std::vector<double> values);

  double v_max() const { return v_max_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double step() const { return v_max_ / static_cast<double>(values_.size() - 1); }
  double node(std::size_t i) const { return step() * static_cast<double>(i); }

  /// Density at arbitrary speed in [0, v_max] (cubic Hermite, clipped at 0).
  double interpolate(double v) const;

  /// 4*pi Int f v^2 dv over the grid (Simpson).
  double mass() const;

  /// Second moment <|v|^2> = 4*pi Int f v^4 dv.
  double second_moment() const;

 private:
  double v_max_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// phi(r) = exp(-T r^2 / 2), the characteristic function of M_T.
RadialCharFn charfn_maxwellian(double temperature, const RadialGrid& grid = {});

/// phi(r) = Sum w_i exp(-T_i r^2 / 2) for a Maxwellian mixture.
/// Weights must be positive and sum to 1 within 1e-12; temps positive.
RadialCharFn charfn_mixture(const std::vector<double>& weights,
                            const std::vector<double>& temps,
                            const RadialGrid& grid = {});

/// Bobylev gain operator for radial states:
///   Qhat+(f,g)(r) = (1/2) Int_{-1}^{1} phi_f(r sp) phi_g(r sm) b(s) ds,
/// with sp = sqrt((1+s)/2), sm = sqrt((1-s)/2). Argument radii never
/// exceed r, so no extrapolation occurs.
RadialCharFn gain(const RadialCharFn& phi_f, const RadialCharFn& phi_g,
                  const AngularKernel& kernel);

/// Fixed-point map Phi(f) = (1-gamma) Q+(f,f) + gamma Q+(f,R).
RadialCharFn phi_map(const RadialCharFn& phi_f, const RadialCharFn& phi_r,
                     const AngularKernel& kernel, double gamma);

/// Radial Fourier inversion  f(v) = (1/(2 pi^2)) Int r^2 phi(r) sinc(r v) dr
/// onto a uniform speed grid with m nodes on [0, v_max]. Requires |phi| to
/// decay below 1e-10 over the last stretch of the r-grid; the result is
/// clipped at zero and renormalized to unit mass.
RadialDensity inverse_transform(const RadialCharFn& phi, double v_max, std::size_t m);

/// Grid samples of the Maxwellian density M_T(v) (normalized on the grid).
RadialDensity maxwellian_density(double temperature, double v_max, std::size_t m);

}  // namespace ness

#endif
