#ifndef NESS_QUADRATURE_HPP
#define NESS_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace ness {

/// One Gauss-Legendre abscissa/weight pair.
struct QuadNode {
  double x;
  double w;
};

/// Gauss-Legendre rule with n nodes on [a, b].
std::vector<QuadNode> gauss_legendre(std::size_t n, double a, double b);

/// Composite Simpson integral of uniformly sampled values with spacing h.
/// Falls back to a trapezoid correction on the last interval when the
/// sample count is even.
double integrate_uniform(const std::vector<double>& values, double h);

}  // namespace ness

#endif
