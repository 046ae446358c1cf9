#include "lobatto/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lobatto/kernels.hpp"

namespace lobatto {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr int kMaxNewtonIterations = 100;

void require_in_domain(double tau, const char* who) {
  if (!(std::fabs(tau) <= 1.0 + kDomainSlack)) {
    std::ostringstream msg;
    msg << who << ": tau = " << tau << " outside [-1, 1]";
    throw std::domain_error(msg.str());
  }
}

struct Legendre2 {
  double p, dp, ddp;
};

// P_n, P_n', P_n'' using the same recurrence as the kernels plus the
// derivative identity P''_{k+1} = P''_{k-1} + (2k + 1) P'_k.
Legendre2 legendre_with_second(int n, double x) {
  if (n == 0) return {1.0, 0.0, 0.0};
  double p_prev = 1.0, p = x;
  double dp_prev = 0.0, dp = 1.0;
  double ddp_prev = 0.0, ddp = 0.0;
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * k + 1.0;
    const double p_next = (c * x * p - k * p_prev) / (k + 1.0);
    const double dp_next = dp_prev + c * p;
    const double ddp_next = ddp_prev + c * dp;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
    ddp_prev = ddp;
    ddp = ddp_next;
  }
  return {p, dp, ddp};
}

std::string bracket_text(double a, double b) {
  std::ostringstream s;
  s.precision(17);
  s << "[" << a << ", " << b << "]";
  return s.str();
}

// Root of P'_degree inside (a, b), where P'_degree changes sign exactly once.
// Newton steps that leave the shrinking bracket fall back to bisection.
double derivative_root_in(int degree, double a, double b, double guess) {
  double fa = legendre_with_second(degree, a).dp;
  double x = std::clamp(guess, a, b);
  if (x <= a || x >= b) x = 0.5 * (a + b);
  const double lo0 = a, hi0 = b;
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const Legendre2 v = legendre_with_second(degree, x);
    if (v.dp == 0.0) return x;
    if ((v.dp > 0.0) == (fa > 0.0)) {
      a = x;
      fa = v.dp;
    } else {
      b = x;
    }
    double next = x - v.dp / v.ddp;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const double step = std::fabs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x) ||
        b - a <= 4.0 * std::numeric_limits<double>::epsilon())
      return x;
  }
  throw RootFindingError("lobatto_nodes: Newton on P'_" + std::to_string(degree) +
                         " did not converge in bracket " + bracket_text(lo0, hi0));
}

}  // namespace

PolyValue legendre_eval(int n, double tau) {
  if (n < 0) throw std::invalid_argument("legendre_eval: negative degree");
  require_in_domain(tau, "legendre_eval");
  PolyValue out{};
  kernels::legendre(n, std::span(&tau, 1), std::span(&out.value, 1),
                    std::span(&out.derivative, 1), kernels::Isa::Scalar);
  return out;
}

PolyValue lobatto_eval(int n, double tau) {
  if (n < 2) throw std::invalid_argument("lobatto_eval: n must be >= 2");
  require_in_domain(tau, "lobatto_eval");
  PolyValue out{};
  kernels::lobatto(n, std::span(&tau, 1), std::span(&out.value, 1),
                   std::span(&out.derivative, 1), kernels::Isa::Scalar);
  return out;
}

std::vector<double> legendre_roots(int n) {
  if (n < 1) throw std::invalid_argument("legendre_roots: n must be >= 1");
  const int half = n / 2;
  std::vector<double> positive;
  positive.reserve(half);
  for (int i = 1; i <= half; ++i) {
    // Chebyshev-based asymptotic guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    bool converged = false;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const PolyValue v = legendre_eval(n, x);
      const double step = v.value / v.derivative;
      x -= step;
      if (std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw RootFindingError("legendre_roots: Newton on P_" + std::to_string(n) +
                             " did not converge near " + bracket_text(x, x));
    positive.push_back(x);
  }
  std::vector<double> roots;
  roots.reserve(n);
  for (double r : positive) roots.push_back(-r);
  if (n % 2 == 1) roots.push_back(0.0);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) roots.push_back(*it);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> NodeSet::abscissas() const {
  std::vector<double> all(collocation_.begin(), collocation_.end());
  all.push_back(exceptional_);
  return all;
}

NodeSet lobatto_nodes(int n) {
  if (n < 3) throw std::invalid_argument("lobatto_nodes: n must be >= 3");
  const int degree = n - 1;
  const std::vector<double> p_roots = legendre_roots(degree);

  // Roots of P'_{n-1} interlace those of P_{n-1}; solve the positive half
  // and mirror so that the node set is exactly symmetric.
  std::vector<double> positive;
  for (std::size_t i = 0; i + 1 < p_roots.size(); ++i) {
    const double a = p_roots[i], b = p_roots[i + 1];
    if (a + b <= 0.0) continue;  // non-positive half, or the bracket about 0
    const double guess = std::cos(std::numbers::pi * (n - 2 - static_cast<double>(i)) / degree);
    positive.push_back(derivative_root_in(degree, a, b, guess));
  }
  std::vector<double> nodes;
  nodes.reserve(n);
  nodes.push_back(-1.0);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) nodes.push_back(-*it);
  if ((n - 2) % 2 == 1) nodes.push_back(0.0);
  for (double r : positive) nodes.push_back(r);
  nodes.push_back(1.0);

  std::vector<double> weights(n);
  const double scale = static_cast<double>(n) * (n - 1);
  for (int k = 0; k < n; ++k) {
    const double p = legendre_eval(degree, nodes[k]).value;
    weights[k] = 2.0 / (scale * p * p);
  }

  // Exceptional sample: root of P_{n-1} nearest zero, the positive one on ties.
  double exceptional = p_roots.front();
  for (double r : p_roots) {
    const double d = std::fabs(r), best = std::fabs(exceptional);
    if (d < best || (d == best && r > exceptional)) exceptional = r;
  }

  return NodeSet(std::move(nodes), std::move(weights), exceptional);
}

std::vector<double> uniform_grid(double a, double b, int size) {
  if (size < 2) throw std::invalid_argument("uniform_grid: size must be >= 2");
  std::vector<double> g(size);
  const double span = b - a;
  for (int i = 0; i < size; ++i) g[i] = a + span * i / (size - 1);
  g.back() = b;
  return g;
}

EnvelopeCheck envelope_check(int n, int grid_size) {
  if (n < 3) throw std::invalid_argument("envelope_check: n must be >= 3");
  if (grid_size < 101) throw std::invalid_argument("envelope_check: grid_size must be >= 101");
  const std::vector<double> tau = uniform_grid(-1.0, 1.0, grid_size);
  std::vector<double> l(tau.size()), dl(tau.size()), f(tau.size());
  kernels::lobatto(n, tau, l, dl);
  const double scale = static_cast<double>(n) * (n - 1);

  EnvelopeCheck out{-std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < tau.size(); ++i) {
    f[i] = l[i] * l[i] + (1.0 - tau[i] * tau[i]) / scale * dl[i] * dl[i];
    out.envelope_excess = std::max(out.envelope_excess, l[i] * l[i] - f[i]);
  }
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) {
    if (tau[i + 1] <= 0.0)
      out.monotonicity_excess = std::max(out.monotonicity_excess, f[i] - f[i + 1]);
    else if (tau[i] >= 0.0)
      out.monotonicity_excess = std::max(out.monotonicity_excess, f[i + 1] - f[i]);
  }
  return out;
}

}  // namespace lobatto
