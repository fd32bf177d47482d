#include "ness/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <memory>
#include <stdexcept>

namespace ness {

std::vector<QuadNode> gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  using Table = gsl_integration_glfixed_table;
  std::unique_ptr<Table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(n), gsl_integration_glfixed_table_free);
  if (!table) throw std::runtime_error("gauss_legendre: table allocation failed");
  std::vector<QuadNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(a, b, i, &nodes[i].x, &nodes[i].w, table.get());
  }
  return nodes;
}

double integrate_uniform(const std::vector<double>& values, double h) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("integrate_uniform: need at least 2 samples");
  if (n == 2) return 0.5 * h * (values[0] + values[1]);
  // Simpson over the largest odd prefix.
  const std::size_t m = (n % 2 == 1) ? n : n - 1;
  double acc = values[0] + values[m - 1];
  for (std::size_t i = 1; i + 1 < m; i += 2) acc += 4.0 * values[i];
  for (std::size_t i = 2; i + 1 < m; i += 2) acc += 2.0 * values[i];
  double result = acc * h / 3.0;
  if (m != n) result += 0.5 * h * (values[n - 2] + values[n - 1]);
  return result;
}

}  // namespace ness
