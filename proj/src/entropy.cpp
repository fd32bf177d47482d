#include "ness/entropy.hpp"

#include <cmath>
#include <string>

#include "ness/errors.hpp"
#include "ness/quadrature.hpp"

namespace ness {

namespace {

constexpr double kDensityFloor = 1e-300;
constexpr std::size_t kSigmaNodes = 256;

void check_reservoirs(const std::vector<JumpReservoir>& reservoirs) {
  if (reservoirs.empty()) throw ConfigError("jump reservoirs: empty list");
  for (const auto& r : reservoirs) {
    if (!(r.eta > 0.0) || !(r.temperature > 0.0)) {
      throw ConfigError("jump reservoirs: eta and T must be positive");
    }
  }
}

double total_eta(const std::vector<JumpReservoir>& rs) {
  double eta = 0.0;
  for (const auto& r : rs) eta += r.eta;
  return eta;
}

double effective_temperature(const std::vector<JumpReservoir>& rs) {
  double eta = 0.0, eta_t = 0.0;
  for (const auto& r : rs) {
    eta += r.eta;
    eta_t += r.eta * r.temperature;
  }
  return eta_t / eta;
}

/// [Qhat+(phi,phi) + Sum eta_a Mhat_a] / (1 + eta)
RadialCharFn jump_map(const RadialCharFn& phi, const AngularKernel& kernel,
                      const std::vector<RadialCharFn>& mhat,
                      const std::vector<JumpReservoir>& reservoirs, double eta) {
  const RadialCharFn own = gain(phi, phi, kernel);
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = own[i];
    for (std::size_t a = 0; a < reservoirs.size(); ++a) {
      acc += reservoirs[a].eta * mhat[a][i];
    }
    out[i] = acc / (1.0 + eta);
  }
  out[0] = 1.0;
  return RadialCharFn(phi.grid(), std::move(out));
}

double maxwell_density_at(double v, double temperature) {
  return std::pow(2.0 * M_PI * temperature, -1.5) * std::exp(-0.5 * v * v / temperature);
}

}  // namespace

RadialCharFn bgk_ness(const AngularKernel& kernel,
                      const std::vector<JumpReservoir>& reservoirs, double tol,
                      const RadialGrid& grid, std::size_t max_iter) {
  check_reservoirs(reservoirs);
  if (!(tol > 0.0)) throw DomainError("bgk_ness: tol must be positive");
  const double eta = total_eta(reservoirs);
  const double t_bar = effective_temperature(reservoirs);
  const double ratio = 1.0 / (1.0 + eta);

  std::vector<RadialCharFn> mhat;
  mhat.reserve(reservoirs.size());
  for (const auto& r : reservoirs) mhat.push_back(charfn_maxwellian(r.temperature, grid));

  RadialCharFn prev = charfn_maxwellian(t_bar, grid);
  RadialCharFn cur = jump_map(prev, kernel, mhat, reservoirs, eta);
  double d_prev = gtw_distance(cur, prev);
  const double d1 = d_prev;
  std::size_t n = 1;
  while (d1 * std::pow(ratio, static_cast<double>(n)) / (1.0 - ratio) > tol) {
    if (n >= max_iter) {
      throw ContractionViolation("bgk_ness: certified bound not reached in " +
                                 std::to_string(max_iter) + " iterations (bug)");
    }
    RadialCharFn next = jump_map(cur, kernel, mhat, reservoirs, eta);
    const double d = gtw_distance(next, cur);
    if (d_prev > 1e-12 && d / d_prev > ratio + 1e-4) {
      throw ContractionViolation("bgk_ness: ratio " + std::to_string(d / d_prev) +
                                 " exceeds 1/(1+eta) (bug)");
    }
    prev = std::move(cur);
    cur = std::move(next);
    d_prev = d;
    ++n;
    const double energy = moments(cur).m2;
    if (std::abs(energy - 3.0 * t_bar) > 1e-6) {
      throw NumericalError("bgk_ness: iterate energy drifted to " + std::to_string(energy));
    }
  }
  return cur;
}

RadialCharFn thermal_step(const RadialCharFn& phi, const AngularKernel& kernel,
                          const std::vector<JumpReservoir>& reservoirs, double dt) {
  check_reservoirs(reservoirs);
  if (!(dt > 0.0 && dt <= 0.25)) throw ConfigError("thermal_step: dt must lie in (0, 0.25]");
  const double eta = total_eta(reservoirs);

  std::vector<RadialCharFn> mhat;
  mhat.reserve(reservoirs.size());
  for (const auto& r : reservoirs) {
    mhat.push_back(charfn_maxwellian(r.temperature, phi.grid()));
  }
  const RadialCharFn mapped = jump_map(phi, kernel, mhat, reservoirs, eta);
  const double decay = std::exp(-(1.0 + eta) * dt);
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = decay * phi[i] + (1.0 - decay) * mapped[i];
  }
  out[0] = 1.0;
  return RadialCharFn(phi.grid(), std::move(out));
}

double boltzmann_entropy(const RadialDensity& f) {
  const double mass = f.mass();
  if (std::abs(mass - 1.0) > 1e-4) {
    throw DomainError("boltzmann_entropy: input mass " + std::to_string(mass) +
                      " deviates from 1 beyond 1e-4");
  }
  const std::size_t n = f.size();
  const double h = f.step();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f.node(i);
    const double fv = f.values()[i];
    integrand[i] = fv < kDensityFloor ? 0.0 : fv * std::log(fv) * v * v;
  }
  return -4.0 * M_PI * integrate_uniform(integrand, h);
}

double sigma_alpha(const RadialDensity& f, const JumpReservoir& res) {
  const auto nodes = gauss_legendre(kSigmaNodes, 0.0, f.v_max());
  // Per-node tables: density, Maxwellian, log ratio, and the 4 pi v^2 w weight.
  std::vector<double> fv(kSigmaNodes), mv(kSigmaNodes), lognu(kSigmaNodes), wt(kSigmaNodes);
  for (std::size_t i = 0; i < kSigmaNodes; ++i) {
    const double v = nodes[i].x;
    fv[i] = std::max(f.interpolate(v), kDensityFloor);
    mv[i] = maxwell_density_at(v, res.temperature);
    lognu[i] = std::log(fv[i]) - std::log(mv[i]);
    wt[i] = 4.0 * M_PI * v * v * nodes[i].w;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < kSigmaNodes; ++i) {
    for (std::size_t j = 0; j < kSigmaNodes; ++j) {
      // M(v)M(v')[nu(v)-nu(v')] = f(v)M(v') - f(v')M(v), stable at large v.
      acc += wt[i] * wt[j] * (fv[i] * mv[j] - fv[j] * mv[i]) * (lognu[i] - lognu[j]);
    }
  }
  return 0.5 * res.eta * acc;
}

double flux_alpha(const MomentSummary& m, const JumpReservoir& res) {
  return 0.5 * res.eta * (m.m2 - 3.0 * res.temperature);
}

double flux_alpha(const RadialDensity& f, const JumpReservoir& res) {
  const auto nodes = gauss_legendre(kSigmaNodes, 0.0, f.v_max());
  std::vector<double> fv(kSigmaNodes), mv(kSigmaNodes), wt(kSigmaNodes);
  for (std::size_t i = 0; i < kSigmaNodes; ++i) {
    const double v = nodes[i].x;
    fv[i] = std::max(f.interpolate(v), 0.0);
    mv[i] = maxwell_density_at(v, res.temperature);
    wt[i] = 4.0 * M_PI * v * v * nodes[i].w;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < kSigmaNodes; ++i) {
    const double vi2 = nodes[i].x * nodes[i].x;
    for (std::size_t j = 0; j < kSigmaNodes; ++j) {
      const double vj2 = nodes[j].x * nodes[j].x;
      // K(v,v') = eta M(v); flux integrand (1/2) K(v,v') f(v') (v'^2 - v^2).
      acc += wt[i] * wt[j] * mv[i] * fv[j] * (vj2 - vi2);
    }
  }
  return 0.5 * res.eta * acc;
}

EntropyLedger ledger(const RadialDensity& f_now, const RadialDensity& f_prev, double dt,
                     const std::vector<JumpReservoir>& reservoirs) {
  check_reservoirs(reservoirs);
  if (!(dt > 0.0)) throw DomainError("ledger: dt must be positive");
  if (f_now.size() != f_prev.size() || f_now.v_max() != f_prev.v_max()) {
    throw ShapeError("ledger: snapshots on different speed grids");
  }

  std::vector<double> mid(f_now.size());
  for (std::size_t i = 0; i < mid.size(); ++i) {
    mid[i] = 0.5 * (f_now.values()[i] + f_prev.values()[i]);
  }
  const RadialDensity f_mid(f_now.v_max(), std::move(mid));
  const MomentSummary mom{f_mid.second_moment(), 0.0};

  EntropyLedger row;
  row.S = boltzmann_entropy(f_mid);
  row.S_dot = (boltzmann_entropy(f_now) - boltzmann_entropy(f_prev)) / dt;
  for (const auto& r : reservoirs) {
    row.sigma_alpha.push_back(sigma_alpha(f_mid, r));
    row.J_alpha.push_back(flux_alpha(mom, r));
  }
  row.sigma_R = 0.0;
  for (std::size_t a = 0; a < reservoirs.size(); ++a) {
    row.sigma_R += reservoirs[a].beta() * row.J_alpha[a];
  }
  row.sigma_total = row.S_dot + row.sigma_R;
  double sum_sigma = 0.0;
  for (double s : row.sigma_alpha) sum_sigma += s;
  row.sigma_B_residual = row.sigma_total - sum_sigma;
  return row;
}

}  // namespace ness
