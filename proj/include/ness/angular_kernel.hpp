#ifndef NESS_ANGULAR_KERNEL_HPP
#define NESS_ANGULAR_KERNEL_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "ness/quadrature.hpp"
#include "ness/rng.hpp"

namespace ness {

/// Angular scattering cross-section b(s) on [-1,1] under the cutoff
/// normalization (1/2) * integral of b = 1, together with the cached
/// Gauss-Legendre rule used for every integral of b against smooth factors.
///
/// All rate constants of the collision model derive from this object:
///   contraction factor   lambda  = (1-gamma) + gamma * (1/4) Int (1+s) b(s) ds
///   GTW decay rate       lambda1 = 1 - lambda
///   moment decay rate            = (gamma/2) * [1 - (1/2) Int s b(s) ds]
class AngularKernel {
 public:
  enum class Kind { Isotropic, Linear };

  double operator()(double s) const { return evaluator_(s); }

  const std::vector<QuadNode>& quad() const { return quad_; }
  bool is_even() const { return even_; }
  Kind kind() const { return kind_; }
  double linear_coefficient() const { return linear_a_; }

  /// (1/2) Int b(s) ds on the cached rule; equals 1 by construction.
  double normalization() const { return half_int_b_; }

  /// (1/2) Int s b(s) ds; zero for even kernels.
  double mean_cosine() const { return half_int_sb_; }

  /// Contraction factor lambda of the fixed-point map Phi at coupling gamma.
  /// Returns exactly 1 - gamma/2 when the kernel is even.
  double contraction_factor(double gamma) const;

  /// Exponential decay rate of the first moment and of the energy deviation
  /// under the mixture-reservoir evolution: (gamma/2)[1 - (1/2) Int s b ds].
  double moment_decay_rate(double gamma) const;

  /// GTW convergence rate lambda1 = 1 - contraction_factor(gamma).
  double gtw_decay_rate(double gamma) const;

  /// Draw a scattering-angle cosine with density b(s)/2 via tabulated
  /// inverse CDF (4096 panels, linear interpolation).
  double sample_cosine(Rng& rng) const;

  friend AngularKernel make_kernel(Kind kind, double a, std::size_t node_count);

 private:
  AngularKernel() = default;

  std::function<double(double)> evaluator_;
  std::vector<QuadNode> quad_;
  bool even_ = true;
  Kind kind_ = Kind::Isotropic;
  double linear_a_ = 0.0;
  double half_int_b_ = 1.0;
  double half_int_sb_ = 0.0;
  double quarter_int_1ps_b_ = 0.5;  // (1/4) Int (1+s) b(s) ds
  std::vector<double> cdf_;         // cumulative of b/2 on uniform s panels
};

/// Build one of the shipped kernel families on a Gauss-Legendre rule with
/// node_count >= 16 nodes. For Kind::Linear, b(s) = 1 + a*s with |a| <= 1;
/// `a` is ignored for Kind::Isotropic.
AngularKernel make_kernel(AngularKernel::Kind kind, double a = 0.0,
                          std::size_t node_count = 64);

}  // namespace ness

#endif
