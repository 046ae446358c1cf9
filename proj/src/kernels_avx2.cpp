#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace lobatto::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

void legendre(int degree, const double* tau, double* value, double* derivative,
              std::size_t count) {
  const std::size_t full = count - count % kLanes;
  if (degree == 0) {
    for (std::size_t i = 0; i < count; ++i) {
      value[i] = 1.0;
      derivative[i] = 0.0;
    }
    return;
  }
  for (std::size_t i = 0; i < full; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(tau + i);
    __m256d p_prev = _mm256_set1_pd(1.0);
    __m256d p = x;
    __m256d dp_prev = _mm256_setzero_pd();
    __m256d dp = _mm256_set1_pd(1.0);
    for (int k = 1; k < degree; ++k) {
      const __m256d c = _mm256_set1_pd(2.0 * k + 1.0);
      const __m256d kk = _mm256_set1_pd(static_cast<double>(k));
      const __m256d k1 = _mm256_set1_pd(k + 1.0);
      const __m256d lhs = _mm256_mul_pd(_mm256_mul_pd(c, x), p);
      const __m256d rhs = _mm256_mul_pd(kk, p_prev);
      const __m256d p_next = _mm256_div_pd(_mm256_sub_pd(lhs, rhs), k1);
      const __m256d dp_next = _mm256_add_pd(dp_prev, _mm256_mul_pd(c, p));
      p_prev = p;
      p = p_next;
      dp_prev = dp;
      dp = dp_next;
    }
    _mm256_storeu_pd(value + i, p);
    _mm256_storeu_pd(derivative + i, dp);
  }
  // Tail uses the same operation order as the vector body.
  for (std::size_t i = full; i < count; ++i) {
    const double x = tau[i];
    double p_prev = 1.0, p = x, dp_prev = 0.0, dp = 1.0;
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
  const std::size_t full = count - count % kLanes;
  const __m256d s = _mm256_set1_pd(scale);
  for (std::size_t i = 0; i < full; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(tau + i);
    __m256d acc = _mm256_set1_pd(1.0);
    for (std::size_t j = 0; j < root_count; ++j)
      acc = _mm256_mul_pd(acc, _mm256_sub_pd(x, _mm256_set1_pd(roots[j])));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(acc, s));
  }
  for (std::size_t i = full; i < count; ++i) {
    double acc = 1.0;
    for (std::size_t j = 0; j < root_count; ++j) acc = acc * (tau[i] - roots[j]);
    out[i] = acc * scale;
  }
}

double max_abs(const double* x, std::size_t count) {
  const std::size_t full = count - count % kLanes;
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  for (std::size_t i = 0; i < full; i += kLanes)
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, m);
  double r = 0.0;
  for (double v : lanes) r = std::fmax(r, v);
  for (std::size_t i = full; i < count; ++i) r = std::fmax(r, std::fabs(x[i]));
  return r;
}

}  // namespace lobatto::kernels::avx2
