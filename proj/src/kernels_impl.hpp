#pragma once

// Per-ISA kernel entry points. Sizes are validated by the dispatcher.

#include <cstddef>

namespace lobatto::kernels {

namespace scalar {
void legendre(int degree, const double* tau, double* value, double* derivative,
              std::size_t count);
void node_product(const double* roots, std::size_t root_count, double scale,
                  const double* tau, double* out, std::size_t count);
double max_abs(const double* x, std::size_t count);
}  // namespace scalar

#ifdef LOBATTO_HAVE_AVX2
namespace avx2 {
void legendre(int degree, const double* tau, double* value, double* derivative,
              std::size_t count);
void node_product(const double* roots, std::size_t root_count, double scale,
                  const double* tau, double* out, std::size_t count);
double max_abs(const double* x, std::size_t count);
}  // namespace avx2
#endif

}  // namespace lobatto::kernels
