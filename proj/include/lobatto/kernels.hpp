#pragma once

// Batched polynomial kernels evaluated over grids of abscissas.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The variants perform the same floating point operations in the
// same order (no FMA contraction) so their results agree to the last bit on
// conforming hardware. The default `Isa` argument picks the best variant the
// running CPU supports.

#include <span>
#include <string_view>
#include <vector>

namespace lobatto::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Best instruction set supported by both this build and the running CPU.
Isa detected_isa();

/// All variants usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// P_degree and P'_degree at each tau. Output spans must match tau in size.
void legendre(int degree, std::span<const double> tau, std::span<double> value,
              std::span<double> derivative, Isa isa = detected_isa());

/// L_n and L_n' at each tau (n >= 2).
void lobatto(int n, std::span<const double> tau, std::span<double> value,
             std::span<double> derivative, Isa isa = detected_isa());

/// out[i] = scale * prod_j (tau[i] - roots[j]).
void node_product(std::span<const double> roots, double scale,
                  std::span<const double> tau, std::span<double> out,
                  Isa isa = detected_isa());

/// max_i |x[i]|; zero for an empty span.
double max_abs(std::span<const double> x, Isa isa = detected_isa());

}  // namespace lobatto::kernels
