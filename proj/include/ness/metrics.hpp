#ifndef NESS_METRICS_HPP
#define NESS_METRICS_HPP

#include <vector>

#include "ness/spectral.hpp"

namespace ness {

/// Second and fourth velocity moments extracted from a characteristic function.
struct MomentSummary {
  double m2 = 0.0;  ///< <|v|^2>
  double m4 = 0.0;  ///< <|v|^4>
};

/// Moment extraction from the small-r expansion
///   phi(r) = 1 - m2 r^2/6 + m4 r^4/120 - ...
/// via least squares in powers of r^2 over the near-origin nodes.
/// Throws NumericalError when the fit residual exceeds 1e-6.
MomentSummary moments(const RadialCharFn& phi);

/// Gabetta-Toscani-Wennberg distance
///   d_GTW(f,g) = sup_{xi != 0} |fhat - ghat| / |xi|^2,
/// evaluated as the max over grid nodes r_i > 0 (a grid lower bound of the
/// true supremum). Defined only when the second moments agree within 1e-4;
/// otherwise throws MetricDomainError (first moments vanish by isotropy).
double gtw_distance(const RadialCharFn& phi_f, const RadialCharFn& phi_g);

/// 2-Wasserstein distance between two isotropic laws on R^3 given as
/// equal-size samples of the speed |v|. Optimal transport between isotropic
/// laws is radial and monotone, so W2^2 is the quantile coupling
///   Int_0^1 (F_f^{-1}(u) - F_g^{-1}(u))^2 du,
/// which for equal-size empirical measures is the mean squared difference
/// of sorted samples.
double radial_w2(std::vector<double> speeds_f, std::vector<double> speeds_g);

/// Same distance for grid densities, via quantile coupling on a uniform
/// u-grid (quantiles by monotone interpolation of the speed CDFs).
double radial_w2(const RadialDensity& f, const RadialDensity& g);

}  // namespace ness

#endif
