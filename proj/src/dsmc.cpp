#include "ness/dsmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "ness/errors.hpp"
#include "ness/metrics.hpp"

namespace ness {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Unit vector with cosine c to `axis` (unit) and the given azimuth.
Vec3 direction_about(const Vec3& axis, double cosine, double azimuth) {
  // Orthonormal frame: pick the coordinate axis least aligned with `axis`.
  std::size_t k = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (std::abs(axis[i]) < std::abs(axis[k])) k = i;
  }
  Vec3 e1{0.0, 0.0, 0.0};
  e1[k] = 1.0;
  // e1 <- normalize(e1 - (e1.axis) axis)
  const double proj = dot(e1, axis);
  for (std::size_t i = 0; i < 3; ++i) e1[i] -= proj * axis[i];
  const double n1 = norm(e1);
  for (std::size_t i = 0; i < 3; ++i) e1[i] /= n1;
  const Vec3 e2{axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2],
                axis[0] * e1[1] - axis[1] * e1[0]};
  const double sine = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
  const double ca = std::cos(azimuth), sa = std::sin(azimuth);
  Vec3 out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = cosine * axis[i] + sine * (ca * e1[i] + sa * e2[i]);
  }
  return out;
}

/// Collide particle `i` against velocity `partner`; returns the pair
/// (v_i', partner'). Consumes exactly one cosine and one azimuth draw.
std::pair<Vec3, Vec3> scatter(ParticleEnsemble& ens, std::size_t i, const Vec3& partner,
                              const AngularKernel& kernel) {
  const Vec3& v = ens.velocities[i];
  const double cosine = kernel.sample_cosine(ens.rng);
  const double azimuth = ens.rng.uniform(0.0, 2.0 * M_PI);
  Vec3 rel;
  for (std::size_t c = 0; c < 3; ++c) rel[c] = v[c] - partner[c];
  const double speed = norm(rel);
  if (speed == 0.0) return {v, partner};  // grazing no-op; draws stay consumed
  Vec3 axis;
  for (std::size_t c = 0; c < 3; ++c) axis[c] = rel[c] / speed;
  const Vec3 sigma = direction_about(axis, cosine, azimuth);
  return post_collision(v, partner, sigma);
}

std::size_t pick_partner(Rng& rng, std::size_t self, std::size_t n) {
  std::size_t j = static_cast<std::size_t>(rng.integer(n - 1));
  if (j >= self) ++j;
  return j;
}

void collide_sweep(ParticleEnsemble& ens, const AngularKernel& kernel, double gamma,
                   const std::vector<double>& weights, const std::vector<double>& temps,
                   double dt) {
  const std::size_t n = ens.velocities.size();
  const double p_res = gamma * dt;
  const double p_pair = p_res + (1.0 - gamma) * dt * 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = ens.rng.uniform();
    if (u < p_res) {
      // Reservoir collision: partner drawn from R and discarded afterwards.
      double pick = ens.rng.uniform();
      std::size_t c = 0;
      while (c + 1 < weights.size() && pick >= weights[c]) {
        pick -= weights[c];
        ++c;
      }
      const Vec3 partner = ens.rng.maxwellian_velocity(temps[c]);
      ens.velocities[i] = scatter(ens, i, partner, kernel).first;
    } else if (u < p_pair) {
      const std::size_t j = pick_partner(ens.rng, i, n);
      const auto [vi, vj] = scatter(ens, i, ens.velocities[j], kernel);
      ens.velocities[i] = vi;
      ens.velocities[j] = vj;
    }
  }
  ens.time += dt;
}

}  // namespace

OuReservoir reduce_ou_reservoirs(const std::vector<OuReservoir>& reservoirs) {
  if (reservoirs.empty()) throw ConfigError("reduce_ou_reservoirs: empty reservoir list");
  double eta = 0.0, eta_t = 0.0;
  for (const auto& r : reservoirs) {
    if (!(r.eta > 0.0) || !(r.temperature > 0.0)) {
      throw ConfigError("reduce_ou_reservoirs: eta and T must be positive");
    }
    eta += r.eta;
    eta_t += r.eta * r.temperature;
  }
  return {eta, eta_t / eta};
}

ParticleEnsemble::ParticleEnsemble(std::size_t n, std::uint64_t seed)
    : velocities(n, Vec3{0.0, 0.0, 0.0}), rng(seed) {
  if (n < 2) throw DomainError("ParticleEnsemble: need at least 2 particles");
}

void ParticleEnsemble::initialize_maxwellian(double temperature, const Vec3& shift) {
  if (!(temperature > 0.0)) {
    throw DomainError("initialize_maxwellian: temperature must be positive");
  }
  for (auto& v : velocities) {
    v = rng.maxwellian_velocity(temperature);
    for (std::size_t c = 0; c < 3; ++c) v[c] += shift[c];
  }
}

Vec3 ParticleEnsemble::mean_velocity() const {
  Vec3 m{0.0, 0.0, 0.0};
  for (const auto& v : velocities) {
    for (std::size_t c = 0; c < 3; ++c) m[c] += v[c];
  }
  const double n = static_cast<double>(velocities.size());
  for (std::size_t c = 0; c < 3; ++c) m[c] /= n;
  return m;
}

double ParticleEnsemble::mean_square_speed() const {
  double acc = 0.0;
  for (const auto& v : velocities) acc += dot(v, v);
  return acc / static_cast<double>(velocities.size());
}

double ParticleEnsemble::mean_quartic_speed() const {
  double acc = 0.0;
  for (const auto& v : velocities) {
    const double s2 = dot(v, v);
    acc += s2 * s2;
  }
  return acc / static_cast<double>(velocities.size());
}

std::vector<double> ParticleEnsemble::speeds() const {
  std::vector<double> out(velocities.size());
  for (std::size_t i = 0; i < velocities.size(); ++i) out[i] = norm(velocities[i]);
  return out;
}

std::pair<Vec3, Vec3> post_collision(const Vec3& v, const Vec3& v_star, const Vec3& sigma) {
  if (std::abs(norm(sigma) - 1.0) > 1e-12) {
    throw DomainError("post_collision: sigma must be a unit vector");
  }
  Vec3 rel;
  for (std::size_t c = 0; c < 3; ++c) rel[c] = v[c] - v_star[c];
  const double speed = norm(rel);
  Vec3 vp, vsp;
  for (std::size_t c = 0; c < 3; ++c) {
    const double center = 0.5 * (v[c] + v_star[c]);
    const double kick = 0.5 * speed * sigma[c];
    vp[c] = center + kick;
    vsp[c] = center - kick;
  }
  return {vp, vsp};
}

void collide_step(ParticleEnsemble& ens, const AngularKernel& kernel,
                  const MixtureReservoir& res, double dt) {
  if (!(dt > 0.0 && dt <= 0.05)) {
    throw DomainError("collide_step: dt must lie in (0, 0.05]");
  }
  if (!(res.gamma > 0.0 && res.gamma < 1.0)) {
    throw DomainError("collide_step: gamma must lie in (0,1)");
  }
  if (res.weights.empty() || res.weights.size() != res.temps.size()) {
    throw ConfigError("collide_step: reservoir weights/temps mismatch");
  }
  collide_sweep(ens, kernel, res.gamma, res.weights, res.temps, dt);
}

void collide_step_internal(ParticleEnsemble& ens, const AngularKernel& kernel, double dt) {
  if (!(dt > 0.0 && dt <= 0.05)) {
    throw DomainError("collide_step_internal: dt must lie in (0, 0.05]");
  }
  collide_sweep(ens, kernel, 0.0, {}, {}, dt);
}

void ou_step(ParticleEnsemble& ens, double eta, double temperature, double dt) {
  if (!(eta > 0.0) || !(temperature > 0.0) || !(dt > 0.0)) {
    throw DomainError("ou_step: eta, T, dt must be positive");
  }
  const double decay = std::exp(-eta * dt);
  const double kick = std::sqrt(temperature * (1.0 - decay * decay));
  for (auto& v : ens.velocities) {
    for (std::size_t c = 0; c < 3; ++c) {
      v[c] = decay * v[c] + kick * ens.rng.normal();
    }
  }
  ens.time += dt;
}

namespace {

DsmcSeries run_replica(const DsmcConfig& cfg, std::uint64_t seed) {
  ParticleEnsemble ens(cfg.n_particles, seed);
  ens.initialize_maxwellian(cfg.init_temperature, cfg.init_shift);

  OuReservoir effective{};
  const bool ou_mode = cfg.ou.has_value();
  if (ou_mode) effective = reduce_ou_reservoirs(*cfg.ou);

  DsmcSeries series;
  const auto record = [&](double t) {
    series.times.push_back(t);
    series.mean_v.push_back(ens.mean_velocity());
    series.m2.push_back(ens.mean_square_speed());
    series.m4.push_back(ens.mean_quartic_speed());
  };
  std::size_t next_snapshot = 0;
  const auto snapshot = [&](double t) {
    while (next_snapshot < cfg.snapshot_times.size() &&
           t >= cfg.snapshot_times[next_snapshot] - 1e-9) {
      auto sp = ens.speeds();
      std::sort(sp.begin(), sp.end());
      series.speed_snapshots.emplace_back(t, std::move(sp));
      ++next_snapshot;
    }
  };

  record(0.0);
  snapshot(0.0);
  double t = 0.0;
  double next_record = cfg.record_interval;
  while (t < cfg.t_end - 1e-9) {
    const double dt = std::min(cfg.dt, cfg.t_end - t);
    if (ou_mode) {
      if (cfg.internal_collisions) collide_step_internal(ens, *cfg.kernel, dt);
      ou_step(ens, effective.eta, effective.temperature, dt);
      if (cfg.internal_collisions) ens.time -= dt;  // both half-kernels advanced it
    } else {
      collide_step(ens, *cfg.kernel, *cfg.mixture, dt);
    }
    t += dt;
    if (t >= next_record - 1e-9) {
      record(t);
      next_record += cfg.record_interval;
    }
    snapshot(t);
  }
  return series;
}

}  // namespace

DsmcResult run_dsmc(const DsmcConfig& cfg) {
  if (cfg.kernel == nullptr) throw ConfigError("run_dsmc: kernel not set");
  if (cfg.mixture.has_value() == cfg.ou.has_value()) {
    throw ConfigError("run_dsmc: exactly one reservoir kind must be set");
  }
  if (cfg.replicas == 0) throw ConfigError("run_dsmc: need at least one replica");

  std::vector<std::future<DsmcSeries>> jobs;
  jobs.reserve(cfg.replicas);
  for (std::size_t r = 0; r < cfg.replicas; ++r) {
    const std::uint64_t seed = cfg.seed + 0x9E3779B9ull * (r + 1);
    jobs.push_back(std::async(std::launch::async, run_replica, std::cref(cfg), seed));
  }
  DsmcResult result;
  result.replicas.reserve(cfg.replicas);
  for (auto& job : jobs) result.replicas.push_back(job.get());
  return result;
}

CoupledSeries run_coupled_ou(std::size_t n_particles, double dt, double t_end,
                             double record_interval, const OuReservoir& effective,
                             double init_temp_a, double init_temp_b,
                             bool internal_collisions, std::uint64_t seed,
                             const AngularKernel& kernel) {
  // Identical seeds keep both streams in lockstep: every branch decision is
  // driven by the same uniforms, so the two runs consume draws identically.
  ParticleEnsemble a(n_particles, seed);
  ParticleEnsemble b(n_particles, seed);
  a.initialize_maxwellian(init_temp_a);
  b.initialize_maxwellian(init_temp_b);

  CoupledSeries series;
  const auto record = [&](double t) {
    series.times.push_back(t);
    series.w2.push_back(radial_w2(a.speeds(), b.speeds()));
  };
  record(0.0);
  double t = 0.0;
  double next_record = record_interval;
  while (t < t_end - 1e-9) {
    const double step = std::min(dt, t_end - t);
    if (internal_collisions) {
      collide_step_internal(a, kernel, step);
      collide_step_internal(b, kernel, step);
    }
    ou_step(a, effective.eta, effective.temperature, step);
    ou_step(b, effective.eta, effective.temperature, step);
    t += step;
    if (t >= next_record - 1e-9) {
      record(t);
      next_record += record_interval;
    }
  }
  return series;
}

}  // namespace ness
