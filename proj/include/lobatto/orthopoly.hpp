#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lobatto {

/// Value and first derivative of a polynomial at a point.
struct PolyValue {
  double value;
  double derivative;
};

/// Thrown when Newton iteration for a node fails to converge.
class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Legendre polynomial P_n and its derivative at tau via the three-term
/// recurrence. Exact at the endpoints. Requires |tau| <= 1 + 1e-12.
PolyValue legendre_eval(int n, double tau);

/// Lobatto polynomial L_n(tau) = (tau^2 - 1) P'_{n-1}(tau) and its derivative
/// n (n - 1) P_{n-1}(tau). Requires n >= 2.
PolyValue lobatto_eval(int n, double tau);

/// Roots of P_n in ascending order. The middle root of odd n is exactly 0 and
/// the set is exactly symmetric.
std::vector<double> legendre_roots(int n);

/// Gauss-Lobatto collocation nodes plus the exceptional sample.
///
/// Nodes are stored in ascending order with the endpoints -1 and +1 at
/// positions 0 and n-1. The exceptional sample follows the collocation nodes,
/// so in the full abscissa set it sits at position n (`exceptional_index()`).
/// Immutable once built.
class NodeSet {
 public:
  int n() const { return static_cast<int>(collocation_.size()); }
  std::span<const double> collocation() const { return collocation_; }
  std::span<const double> weights() const { return weights_; }
  double exceptional() const { return exceptional_; }
  int exceptional_index() const { return n(); }

  /// Collocation nodes followed by the exceptional sample (n + 1 entries).
  std::vector<double> abscissas() const;

 private:
  friend NodeSet lobatto_nodes(int n);
  NodeSet(std::vector<double> collocation, std::vector<double> weights,
          double exceptional)
      : collocation_(std::move(collocation)),
        weights_(std::move(weights)),
        exceptional_(exceptional) {}

  std::vector<double> collocation_;
  std::vector<double> weights_;
  double exceptional_;
};

/// Builds the n Lobatto nodes, their quadrature weights and the exceptional
/// sample (the root of P_{n-1} nearest zero; the positive one when two roots
/// are equally near). Requires n >= 3.
NodeSet lobatto_nodes(int n);

struct EnvelopeCheck {
  /// max over the grid of L_n^2 - F
  double envelope_excess;
  /// largest decrease of F left of zero or increase right of zero
  double monotonicity_excess;

  double max_violation() const {
    return envelope_excess > monotonicity_excess ? envelope_excess
                                                 : monotonicity_excess;
  }
};

/// Evaluates F(tau) = L_n^2 + (1 - tau^2) / (n (n - 1)) L_n'^2 on a uniform
/// grid and reports how far it falls short of bounding L_n^2 from above and of
/// being unimodal about zero. Requires n >= 3 and grid_size >= 101.
EnvelopeCheck envelope_check(int n, int grid_size);

/// Uniform grid of `size` points covering [a, b] with exact endpoints.
std::vector<double> uniform_grid(double a, double b, int size);

}  // namespace lobatto
