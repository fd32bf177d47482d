#include "ness/evolve.hpp"

#include <cmath>

#include "ness/errors.hpp"
#include "ness/metrics.hpp"

namespace ness {

RadialCharFn step(const RadialCharFn& phi, const RadialCharFn& phi_r,
                  const AngularKernel& kernel, double gamma, double dt) {
  if (!(dt > 0.0 && dt <= 0.25)) {
    throw ConfigError("step: dt must lie in (0, 0.25]");
  }
  const RadialCharFn mapped = phi_map(phi, phi_r, kernel, gamma);
  const double decay = std::exp(-dt);
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = decay * phi[i] + (1.0 - decay) * mapped[i];
  }
  out[0] = 1.0;
  return RadialCharFn(phi.grid(), std::move(out));
}

Trajectory run(const RadialCharFn& phi0, const RadialCharFn& phi_r,
               const AngularKernel& kernel, double gamma,
               const RadialCharFn& phi_inf, const EvolveOptions& opts) {
  if (!(opts.t_end > 0.0)) throw ConfigError("run: t_end must be positive");
  if (!(opts.record_interval > 0.0)) throw ConfigError("run: record_interval must be positive");

  Trajectory traj;
  traj.gtw_tracked = std::abs(moments(phi0).m2 - 1.0) <= 1e-4;

  RadialCharFn phi = phi0;
  double t = 0.0;
  double next_record = 0.0;
  std::size_t next_snapshot = 0;

  const auto record = [&](double now, const RadialCharFn& state) {
    traj.times.push_back(now);
    if (traj.gtw_tracked) traj.gtw_to_ness.push_back(gtw_distance(state, phi_inf));
    traj.m2_deviation.push_back(moments(state).m2 - 1.0);
  };

  record(0.0, phi);
  next_record += opts.record_interval;

  const double eps = 1e-12;
  while (t < opts.t_end - eps) {
    const double dt = std::min(opts.dt, opts.t_end - t);
    phi = step(phi, phi_r, kernel, gamma, dt);
    t += dt;
    if (t >= next_record - eps) {
      record(t, phi);
      next_record += opts.record_interval;
    }
    while (next_snapshot < opts.snapshot_times.size() &&
           t >= opts.snapshot_times[next_snapshot] - eps) {
      traj.snapshots.emplace_back(t, phi);
      ++next_snapshot;
    }
  }
  if (traj.times.back() < t - eps) record(t, phi);
  return traj;
}

double fit_log_slope(const std::vector<double>& times, const std::vector<double>& values,
                     double lo, double hi, std::size_t* count_out) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size() && i < values.size(); ++i) {
    const double v = values[i];
    if (!(v >= lo && v <= hi)) continue;
    const double x = times[i];
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (count_out) *count_out = n;
  if (n < 3) return 0.0;
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (dn * sxy - sx * sy) / denom;
}

}  // namespace ness
