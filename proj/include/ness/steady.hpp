#ifndef NESS_STEADY_HPP
#define NESS_STEADY_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "ness/metrics.hpp"
#include "ness/spectral.hpp"

namespace ness {

/// Outcome of the contractive fixed-point iteration f_{n} = Phi(f_{n-1}).
struct FixedPointReport {
  RadialCharFn phi_inf;         ///< best iterate
  std::size_t iterations = 0;   ///< number of Phi applications performed
  std::vector<double> history;  ///< d_n = d_GTW(f_n, f_{n-1}), n = 1..
  double lambda_used = 0.0;     ///< contraction factor certified by the kernel
  double certified_error = 0.0; ///< lambda^n d_1 / (1 - lambda)
  bool converged = false;       ///< certified_error <= tol reached
  MomentSummary moments_inf;    ///< moments of phi_inf
};

/// A-priori geometric tail bound lambda^n d1 / (1 - lambda).
double a_priori_bound(double lambda, double d1, std::size_t n);

/// Solve the steady state of the mixture-reservoir evolution by iterating
/// Phi from f_0 = R (or an optional alternative start with unit energy).
/// Stops once the a-priori bound certifies the error below tol. Ratios of
/// successive distances are checked against lambda while the distances sit
/// above the grid noise floor; a violation throws ContractionViolation.
/// Hitting max_iter returns the best iterate with converged = false.
FixedPointReport solve_ness(const RadialCharFn& phi_r, const AngularKernel& kernel,
                            double gamma, double tol, std::size_t max_iter,
                            const std::optional<RadialCharFn>& start = std::nullopt);

}  // namespace ness

#endif
