#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "lobatto/orthopoly.hpp"

using namespace lobatto;

namespace {

// Gauss-Legendre nodes as eigenvalues of the symmetric Jacobi matrix.
std::vector<double> golub_welsch_nodes(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  const Eigen::VectorXd ev = es.eigenvalues();
  return {ev.data(), ev.data() + n};
}

double monomial_integral(int d) { return d % 2 == 1 ? 0.0 : 2.0 / (d + 1); }

}  // namespace

TEST_CASE("legendre_eval closed forms") {
  auto p = legendre_eval(0, 0.3);
  CHECK(p.value == 1.0);
  CHECK(p.derivative == 0.0);

  p = legendre_eval(3, 1.0);
  CHECK(p.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.derivative == doctest::Approx(6.0).epsilon(1e-15));

  p = legendre_eval(4, 0.0);
  CHECK(p.value == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(std::fabs(p.derivative) < 1e-15);

  for (double t : {-0.9, -0.31, 0.0, 0.47, 0.999}) {
    const auto p5 = legendre_eval(5, t);
    const double v = (63 * std::pow(t, 5) - 70 * std::pow(t, 3) + 15 * t) / 8;
    const double d = (315 * std::pow(t, 4) - 210 * t * t + 15) / 8;
    CHECK(p5.value == doctest::Approx(v).epsilon(1e-13));
    CHECK(p5.derivative == doctest::Approx(d).epsilon(1e-13));
  }
}

TEST_CASE("legendre_eval endpoint values are exact") {
  for (int n = 0; n <= 60; ++n) {
    CHECK(legendre_eval(n, 1.0).value == 1.0);
    CHECK(legendre_eval(n, -1.0).value == (n % 2 == 0 ? 1.0 : -1.0));
    CHECK(legendre_eval(n, 1.0).derivative == doctest::Approx(0.5 * n * (n + 1)).epsilon(1e-14));
  }
}

TEST_CASE("evaluation outside [-1, 1] is rejected") {
  CHECK_THROWS_AS(legendre_eval(3, 1.1), std::domain_error);
  CHECK_THROWS_AS(lobatto_eval(4, -1.0 - 1e-9), std::domain_error);
  CHECK_NOTHROW(legendre_eval(3, 1.0 + 1e-13));
  CHECK_THROWS_AS(lobatto_eval(1, 0.0), std::invalid_argument);
}

TEST_CASE("lobatto_eval examples") {
  auto l = lobatto_eval(5, 1.0);
  CHECK(l.value == 0.0);
  CHECK(l.derivative == doctest::Approx(20.0).epsilon(1e-15));

  // P_3' = (15 t^2 - 3) / 2, so P_3'(0) = -3/2 and L_4(0) = (0 - 1)(-3/2).
  l = lobatto_eval(4, 0.0);
  CHECK(l.value == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(std::fabs(l.derivative) < 1e-15);

  CHECK(lobatto_eval(4, -0.5).value == doctest::Approx(lobatto_eval(4, 0.5).value).epsilon(1e-15));
}

TEST_CASE("lobatto_eval derivative matches a central difference") {
  const double h = 1e-6;
  for (int n : {3, 6, 11, 20}) {
    for (double t : {-0.8, -0.2, 0.15, 0.7}) {
      const double fd = (lobatto_eval(n, t + h).value - lobatto_eval(n, t - h).value) / (2 * h);
      CHECK(lobatto_eval(n, t).derivative == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("lobatto symmetry") {
  for (int n = 3; n <= 30; ++n) {
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = -1.0 + 2.0 * i / 1000;
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      worst = std::max(worst, std::fabs(lobatto_eval(n, t).value - sign * lobatto_eval(n, -t).value));
    }
    CHECK(worst <= 1e-13);
  }
}

TEST_CASE("legendre_roots agree with the Jacobi-matrix eigenvalues") {
  for (int n = 1; n <= 64; ++n) {
    const auto roots = legendre_roots(n);
    const auto oracle = golub_welsch_nodes(n);
    REQUIRE(roots.size() == static_cast<std::size_t>(n));
    CHECK(std::is_sorted(roots.begin(), roots.end()));
    for (int i = 0; i < n; ++i) CHECK(std::fabs(roots[i] - oracle[i]) <= 1e-13);
  }
}

TEST_CASE("lobatto_nodes closed forms for n = 4 and n = 5") {
  const NodeSet n4 = lobatto_nodes(4);
  const double a = 1.0 / std::sqrt(5.0);
  const std::vector<double> x4{-1.0, -a, a, 1.0}, w4{1.0 / 6, 5.0 / 6, 5.0 / 6, 1.0 / 6};
  for (int k = 0; k < 4; ++k) {
    CHECK(std::fabs(n4.collocation()[k] - x4[k]) <= 1e-13);
    CHECK(std::fabs(n4.weights()[k] - w4[k]) <= 1e-13);
  }
  CHECK(n4.exceptional() == 0.0);

  const NodeSet n5 = lobatto_nodes(5);
  const double b = std::sqrt(3.0 / 7.0);
  const std::vector<double> x5{-1.0, -b, 0.0, b, 1.0}, w5{0.1, 49.0 / 90, 32.0 / 45, 49.0 / 90, 0.1};
  for (int k = 0; k < 5; ++k) {
    CHECK(std::fabs(n5.collocation()[k] - x5[k]) <= 1e-13);
    CHECK(std::fabs(n5.weights()[k] - w5[k]) <= 1e-13);
  }
  const double r = std::sqrt((15.0 - 2.0 * std::sqrt(30.0)) / 35.0);
  CHECK(std::fabs(n5.exceptional() - r) <= 1e-13);
  CHECK(n5.exceptional_index() == 5);
  CHECK(n5.abscissas().size() == 6);
}

TEST_CASE("lobatto_nodes rejects n < 3") {
  CHECK_THROWS_AS(lobatto_nodes(2), std::invalid_argument);
  CHECK_THROWS_AS(lobatto_nodes(0), std::invalid_argument);
}

TEST_CASE("node set structure for n = 3..60") {
  for (int n = 3; n <= 60; ++n) {
    CAPTURE(n);
    const NodeSet ns = lobatto_nodes(n);
    const auto x = ns.collocation();
    const auto w = ns.weights();
    REQUIRE(ns.n() == n);
    CHECK(x.front() == -1.0);
    CHECK(x.back() == 1.0);
    CHECK(std::is_sorted(x.begin(), x.end()));
    for (int k = 0; k < n; ++k) {
      CHECK(x[k] == -x[n - 1 - k]);
      CHECK(w[k] > 0.0);
      CHECK(std::fabs(w[k] - w[n - 1 - k]) <= 1e-15);
    }
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));

    // Interior nodes are stationary points of P_{n-1}: the Newton correction
    // |P'/P''| left at each node is at rounding level.
    for (int k = 1; k < n - 1; ++k) {
      const auto p = legendre_eval(n - 1, x[k]);
      const double h = 1e-7;
      const double second = (legendre_eval(n - 1, x[k] + h).derivative -
                             legendre_eval(n - 1, x[k] - h).derivative) / (2 * h);
      CHECK(std::fabs(p.derivative / second) <= 2e-15);
      CHECK(std::fabs(lobatto_eval(n, x[k]).value) <= 1e-12 * n * n);
    }
    if (n % 2 == 0) CHECK(ns.exceptional() == 0.0);
  }
}

TEST_CASE("stationary-point residual meets 1e-14 while the rounding floor allows") {
  // Beyond n = 8 the floor eps * |P''_{n-1}| exceeds 1e-14.
  for (int n = 3; n <= 8; ++n) {
    const NodeSet ns = lobatto_nodes(n);
    for (int k = 1; k < n - 1; ++k) CHECK(std::fabs(legendre_eval(n - 1, ns.collocation()[k]).derivative) <= 1e-14);
  }
}

TEST_CASE("exceptional sample is the root of P_{n-1} nearest zero, positive on ties") {
  for (int n = 3; n <= 50; ++n) {
    CAPTURE(n);
    const NodeSet ns = lobatto_nodes(n);
    const auto roots = legendre_roots(n - 1);
    double best = roots.front();
    for (double r : roots)
      if (std::fabs(r) < std::fabs(best) || (std::fabs(r) == std::fabs(best) && r > best)) best = r;
    CHECK(ns.exceptional() == doctest::Approx(best).epsilon(1e-15));
    CHECK(ns.exceptional() >= 0.0);
    CHECK(std::fabs(legendre_eval(n - 1, ns.exceptional()).value) <= 1e-14);

    // It maximizes |L_n| over the roots and over a dense grid.
    const double at_xi = std::fabs(lobatto_eval(n, ns.exceptional()).value);
    for (double r : roots) CHECK(std::fabs(lobatto_eval(n, r).value) <= at_xi * (1 + 1e-13));
    double grid_max = 0.0;
    for (int i = 0; i <= 10000; ++i)
      grid_max = std::max(grid_max, std::fabs(lobatto_eval(n, -1.0 + 2.0 * i / 10000).value));
    CHECK(grid_max <= at_xi * (1 + 1e-12));
  }
}

TEST_CASE("quadrature is exact to degree 2n - 3") {
  for (int n = 3; n <= 50; ++n) {
    const NodeSet ns = lobatto_nodes(n);
    for (int d = 0; d <= 2 * n - 3; ++d) {
      double q = 0.0;
      for (int k = 0; k < n; ++k) q += ns.weights()[k] * std::pow(ns.collocation()[k], d);
      CHECK(std::fabs(q - monomial_integral(d)) <= 1e-12);
    }
    // P_{n-1}^2 has degree 2n - 2: its integral is 2 / (2n - 1), the rule gives 2 / (n - 1).
    double q = 0.0;
    for (int k = 0; k < n; ++k) q += ns.weights()[k] * std::pow(legendre_eval(n - 1, ns.collocation()[k]).value, 2);
    CHECK(q == doctest::Approx(2.0 / (n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("envelope_check") {
  CHECK(envelope_check(5, 1001).max_violation() <= 1e-12);
  CHECK(envelope_check(12, 1001).max_violation() <= 1e-12);
  CHECK(envelope_check(7, 101).max_violation() <= 1e-12);
  for (int n = 3; n <= 40; ++n) CHECK(envelope_check(n, 2001).max_violation() <= 1e-12);
  CHECK_THROWS_AS(envelope_check(2, 1001), std::invalid_argument);
  CHECK_THROWS_AS(envelope_check(5, 100), std::invalid_argument);
}

TEST_CASE("uniform_grid") {
  const auto g = uniform_grid(-1.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.0));
}
