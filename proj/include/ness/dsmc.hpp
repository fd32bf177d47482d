#ifndef NESS_DSMC_HPP
#define NESS_DSMC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ness/angular_kernel.hpp"
#include "ness/rng.hpp"

namespace ness {

using Vec3 = std::array<double, 3>;

/// Mixture-collision reservoir: R = Sum w_i M_{T_i}, coupled at rate gamma.
struct MixtureReservoir {
  std::vector<double> weights;
  std::vector<double> temps;
  double gamma = 0.5;
};

/// One Ornstein-Uhlenbeck reservoir (coupling rate eta, temperature T).
struct OuReservoir {
  double eta = 1.0;
  double temperature = 1.0;
};

/// Several OU reservoirs act exactly like one with
///   eta = Sum eta_a,  T = Sum eta_a T_a / eta.
OuReservoir reduce_ou_reservoirs(const std::vector<OuReservoir>& reservoirs);

/// N velocity vectors plus the stream that drives their dynamics.
struct ParticleEnsemble {
  std::vector<Vec3> velocities;
  Rng rng;
  double time = 0.0;

  ParticleEnsemble(std::size_t n, std::uint64_t seed);

  /// Draw every velocity from M_T and add a constant shift.
  void initialize_maxwellian(double temperature, const Vec3& shift = {0.0, 0.0, 0.0});

  Vec3 mean_velocity() const;
  double mean_square_speed() const;   ///< <|v|^2>
  double mean_quartic_speed() const;  ///< <|v|^4>
  std::vector<double> speeds() const;
};

/// Post-collision velocities for scattering direction sigma:
///   v'  = (v + v* + |v - v*| sigma) / 2
///   v*' = (v + v* - |v - v*| sigma) / 2.
/// sigma must be unit within 1e-12.
std::pair<Vec3, Vec3> post_collision(const Vec3& v, const Vec3& v_star, const Vec3& sigma);

/// One collision sweep of the mixture-reservoir model over time dt
/// (requires dt <= 0.05). Each particle undergoes a collision at unit rate:
/// with probability gamma*dt it collides against a reservoir draw (only the
/// particle is replaced); internal pair collisions trigger at (1-gamma)*dt/2
/// per particle and replace both partners, so partner-induced updates bring
/// each particle's internal collision rate to exactly (1-gamma).
void collide_step(ParticleEnsemble& ens, const AngularKernel& kernel,
                  const MixtureReservoir& res, double dt);

/// Internal-only collision sweep (the plain Q(f,f) dynamics at unit rate);
/// pair triggers at dt/2 per particle, both partners replaced.
void collide_step_internal(ParticleEnsemble& ens, const AngularKernel& kernel, double dt);

/// Exact Ornstein-Uhlenbeck transition over dt, per component:
///   v <- exp(-eta dt) v + sqrt(T (1 - exp(-2 eta dt))) * N(0,1).
void ou_step(ParticleEnsemble& ens, double eta, double temperature, double dt);

/// Experiment driver configuration. Exactly one of `mixture` / `ou` is set.
struct DsmcConfig {
  std::size_t n_particles = 100000;
  double dt = 0.02;
  double t_end = 60.0;
  double record_interval = 0.2;
  std::uint64_t seed = 1;
  std::size_t replicas = 16;
  double init_temperature = 1.0 / 3.0;
  Vec3 init_shift = {0.0, 0.0, 0.0};
  std::vector<double> snapshot_times;  ///< store sorted speed samples here
  std::optional<MixtureReservoir> mixture;
  std::optional<std::vector<OuReservoir>> ou;
  bool internal_collisions = true;  ///< OU mode: include the Q(f,f) term
  const AngularKernel* kernel = nullptr;
};

/// Moment time series of one replica.
struct DsmcSeries {
  std::vector<double> times;
  std::vector<Vec3> mean_v;
  std::vector<double> m2;
  std::vector<double> m4;
  std::vector<std::pair<double, std::vector<double>>> speed_snapshots;
};

struct DsmcResult {
  std::vector<DsmcSeries> replicas;
};

/// Run `replicas` independent trajectories (concurrently; replica r uses
/// seed + r * 0x9E3779B9). OU runs alternate collide(dt) then ou(dt).
/// Deterministic for a fixed config.
DsmcResult run_dsmc(const DsmcConfig& cfg);

/// Two ensembles with different initial temperatures driven by identical
/// random draws (synchronous coupling) under the OU reservoir, optionally
/// with internal collisions; records the empirical radial W2 between them.
struct CoupledSeries {
  std::vector<double> times;
  std::vector<double> w2;
};
CoupledSeries run_coupled_ou(std::size_t n_particles, double dt, double t_end,
                             double record_interval, const OuReservoir& effective,
                             double init_temp_a, double init_temp_b,
                             bool internal_collisions, std::uint64_t seed,
                             const AngularKernel& kernel);

}  // namespace ness

#endif
