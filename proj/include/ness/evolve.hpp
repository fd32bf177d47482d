#ifndef NESS_EVOLVE_HPP
#define NESS_EVOLVE_HPP

#include <utility>
#include <vector>

#include "ness/spectral.hpp"

namespace ness {

/// Observable track of one Fourier-space trajectory.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> gtw_to_ness;   ///< empty when GTW tracking is disabled
  std::vector<double> m2_deviation;  ///< <|v|^2>(t) - 1
  std::vector<std::pair<double, RadialCharFn>> snapshots;
  bool gtw_tracked = false;
};

/// One exponential-Euler step of d phi/dt = Phi(phi) - phi:
///   phi <- exp(-dt) phi + (1 - exp(-dt)) Phi(phi).
/// A convex combination of characteristic functions, so phi(0) = 1 and
/// |phi| <= 1 survive unconditionally; first-order accurate in dt.
/// Requires dt in (0, 0.25].
RadialCharFn step(const RadialCharFn& phi, const RadialCharFn& phi_r,
                  const AngularKernel& kernel, double gamma, double dt);

struct EvolveOptions {
  double dt = 0.02;
  double t_end = 40.0;
  double record_interval = 0.2;
  std::vector<double> snapshot_times;
};

/// Integrate from phi0 and record observables on the record grid. GTW
/// tracking against phi_inf is enabled only when phi0 carries unit energy
/// within 1e-4 (the metric's domain); otherwise only moments are tracked.
Trajectory run(const RadialCharFn& phi0, const RadialCharFn& phi_r,
               const AngularKernel& kernel, double gamma,
               const RadialCharFn& phi_inf, const EvolveOptions& opts);

/// Ordinary least-squares slope of log(values) vs time, restricted to
/// records with lo <= value <= hi. Returns the slope; count_out reports how
/// many records entered the fit (slope is 0 when fewer than 3 qualify).
double fit_log_slope(const std::vector<double>& times, const std::vector<double>& values,
                     double lo, double hi, std::size_t* count_out = nullptr);

}  // namespace ness

#endif
