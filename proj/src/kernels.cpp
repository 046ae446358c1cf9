#include "lobatto/kernels.hpp"

#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace lobatto::kernels {

namespace {

void require_same_size(std::size_t expected, std::size_t actual,
                       const char* what) {
  if (expected != actual)
    throw std::invalid_argument(std::string("kernels: ") + what +
                                " size does not match tau");
}

bool cpu_has_avx2() {
#if defined(LOBATTO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void require_available(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2)
    throw std::invalid_argument("kernels: avx2 variant not available on this machine");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (detected_isa() == Isa::Avx2) out.push_back(Isa::Avx2);
  return out;
}

void legendre(int degree, std::span<const double> tau, std::span<double> value,
              std::span<double> derivative, Isa isa) {
  if (degree < 0) throw std::invalid_argument("kernels::legendre: negative degree");
  require_same_size(tau.size(), value.size(), "value");
  require_same_size(tau.size(), derivative.size(), "derivative");
  require_available(isa);
#ifdef LOBATTO_HAVE_AVX2
  if (isa == Isa::Avx2) {
    avx2::legendre(degree, tau.data(), value.data(), derivative.data(), tau.size());
    return;
  }
#endif
  (void)isa;
  scalar::legendre(degree, tau.data(), value.data(), derivative.data(), tau.size());
}

void lobatto(int n, std::span<const double> tau, std::span<double> value,
             std::span<double> derivative, Isa isa) {
  if (n < 2) throw std::invalid_argument("kernels::lobatto: n must be >= 2");
  // P_{n-1} lands in derivative, P'_{n-1} in value; then rescale in place.
  legendre(n - 1, tau, derivative, value, isa);
  const double scale = static_cast<double>(n) * (n - 1);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    value[i] *= (tau[i] * tau[i] - 1.0);
    derivative[i] *= scale;
  }
}

void node_product(std::span<const double> roots, double scale,
                  std::span<const double> tau, std::span<double> out, Isa isa) {
  require_same_size(tau.size(), out.size(), "out");
  require_available(isa);
#ifdef LOBATTO_HAVE_AVX2
  if (isa == Isa::Avx2) {
    avx2::node_product(roots.data(), roots.size(), scale, tau.data(), out.data(),
                       tau.size());
    return;
  }
#endif
  (void)isa;
  scalar::node_product(roots.data(), roots.size(), scale, tau.data(), out.data(),
                       tau.size());
}

double max_abs(std::span<const double> x, Isa isa) {
  require_available(isa);
#ifdef LOBATTO_HAVE_AVX2
  if (isa == Isa::Avx2) return avx2::max_abs(x.data(), x.size());
#endif
  (void)isa;
  return scalar::max_abs(x.data(), x.size());
}

}  // namespace lobatto::kernels
