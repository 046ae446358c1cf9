#include <cmath>

#include "kernels_impl.hpp"

namespace lobatto::kernels::scalar {

void legendre(int degree, const double* tau, double* value, double* derivative,
              std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const double x = tau[i];
    if (degree == 0) {
      value[i] = 1.0;
      derivative[i] = 0.0;
      continue;
    }
    double p_prev = 1.0, p = x;
    double dp_prev = 0.0, dp = 1.0;
    for (int k = 1; k < degree; ++k) {
      const double c = 2.0 * k + 1.0;
      const double p_next = (c * x * p - k * p_prev) / (k + 1.0);
      const double dp_next = dp_prev + c * p;
      p_prev = p;
      p = p_next;
      dp_prev = dp;
      dp = dp_next;
    }
    value[i] = p;
    derivative[i] = dp;
  }
}

void node_product(const double* roots, std::size_t root_count, double scale,
                  const double* tau, double* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 1.0;
    for (std::size_t j = 0; j < root_count; ++j) acc = acc * (tau[i] - roots[j]);
    out[i] = acc * scale;
  }
}

double max_abs(const double* x, std::size_t count) {
  double m = 0.0;
  for (std::size_t i = 0; i < count; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

}  // namespace lobatto::kernels::scalar
