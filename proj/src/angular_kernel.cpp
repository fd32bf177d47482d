#include "ness/angular_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "ness/errors.hpp"

namespace ness {

namespace {
constexpr std::size_t kCdfPanels = 4096;
}

AngularKernel make_kernel(AngularKernel::Kind kind, double a, std::size_t node_count) {
  if (node_count < 16) {
    throw DomainError("make_kernel: node_count must be at least 16");
  }
  AngularKernel k;
  k.kind_ = kind;
  switch (kind) {
    case AngularKernel::Kind::Isotropic:
      k.evaluator_ = [](double) { return 1.0; };
      k.even_ = true;
      k.linear_a_ = 0.0;
      break;
    case AngularKernel::Kind::Linear:
      if (std::abs(a) > 1.0) {
        throw DomainError("make_kernel: linear kernel needs |a| <= 1, got a = " +
                          std::to_string(a));
      }
      k.evaluator_ = [a](double s) { return 1.0 + a * s; };
      k.even_ = (a == 0.0);
      k.linear_a_ = a;
      break;
  }

  k.quad_ = gauss_legendre(node_count, -1.0, 1.0);
  double ib = 0.0, isb = 0.0, i1psb = 0.0;
  for (const auto& node : k.quad_) {
    const double b = k.evaluator_(node.x);
    if (b < 0.0) throw DomainError("make_kernel: b(s) negative at a quadrature node");
    ib += node.w * b;
    isb += node.w * node.x * b;
    i1psb += node.w * (1.0 + node.x) * b;
  }
  k.half_int_b_ = 0.5 * ib;
  k.half_int_sb_ = 0.5 * isb;
  k.quarter_int_1ps_b_ = 0.25 * i1psb;
  if (std::abs(k.half_int_b_ - 1.0) > 1e-10) {
    throw NumericalError("make_kernel: cutoff normalization violated");
  }
  if (k.even_ && std::abs(k.half_int_sb_) > 1e-10) {
    throw NumericalError("make_kernel: even kernel has nonzero mean cosine");
  }

  // Cumulative of b/2 on uniform panels, trapezoid rule, rescaled to end at 1.
  k.cdf_.resize(kCdfPanels + 1);
  k.cdf_[0] = 0.0;
  const double ds = 2.0 / kCdfPanels;
  double prev = k.evaluator_(-1.0);
  for (std::size_t i = 1; i <= kCdfPanels; ++i) {
    const double s = -1.0 + ds * static_cast<double>(i);
    const double cur = k.evaluator_(s);
    k.cdf_[i] = k.cdf_[i - 1] + 0.25 * ds * (prev + cur);
    prev = cur;
  }
  const double total = k.cdf_.back();
  for (auto& c : k.cdf_) c /= total;
  return k;
}

double AngularKernel::contraction_factor(double gamma) const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw DomainError("contraction_factor: gamma must lie in (0,1)");
  }
  if (even_) return 1.0 - 0.5 * gamma;
  return (1.0 - gamma) + gamma * quarter_int_1ps_b_;
}

double AngularKernel::moment_decay_rate(double gamma) const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw DomainError("moment_decay_rate: gamma must lie in (0,1)");
  }
  return 0.5 * gamma * (1.0 - half_int_sb_);
}

double AngularKernel::gtw_decay_rate(double gamma) const {
  return 1.0 - contraction_factor(gamma);
}

double AngularKernel::sample_cosine(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
  if (hi == 0) hi = 1;
  if (hi > kCdfPanels) hi = kCdfPanels;
  const std::size_t lo = hi - 1;
  const double ds = 2.0 / kCdfPanels;
  const double seg = cdf_[hi] - cdf_[lo];
  const double frac = seg > 0.0 ? (u - cdf_[lo]) / seg : 0.0;
  const double s = -1.0 + ds * (static_cast<double>(lo) + frac);
  return std::clamp(s, -1.0, 1.0);
}

}  // namespace ness
