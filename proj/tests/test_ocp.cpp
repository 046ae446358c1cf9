#include <doctest.h>

#include <cmath>

#include "lobatto/ocp.hpp"

using namespace lobatto;

TEST_CASE("benchmark Jacobians match central differences") {
  CHECK(derivative_check(orbit_raising()) <= 1e-5);
  CHECK(derivative_check(nonlinear_ivp().first) <= 1e-5);
  CHECK(derivative_check(orbit_raising(), 25, 1e-6, 99) <= 1e-5);
}

TEST_CASE("derivative_check catches a wrong Jacobian") {
  OcpDefinition ocp = nonlinear_ivp().first;
  ocp.dynamics_jac_u = [](double, const Vec& x, const Vec& u) {
    return Mat(Mat::Constant(1, 1, 2.5 * (x(0) - u(0))));
  };
  CHECK(derivative_check(ocp) > 1e-3);
}

TEST_CASE("orbit raising definition") {
  const OcpDefinition ocp = orbit_raising();
  CHECK(ocp.n_x == 5);
  CHECK(ocp.n_u == 1);
  CHECK(ocp.tf == doctest::Approx(3.32));
  CHECK(ocp.n_phi0 == 5);
  CHECK(ocp.n_phif == 2);
  CHECK_NOTHROW(ocp.validate());

  Vec x0(5);
  x0 << 1, 0, 0, 1, 1;
  CHECK(ocp.boundary_initial(0.0, x0).lpNorm<Eigen::Infinity>() == 0.0);
  Vec xf(5);
  xf << 1.5, 2.0, 0.0, 1.0 / std::sqrt(1.5), 0.75;
  CHECK(ocp.boundary_final(ocp.tf, xf).lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK(ocp.endpoint_cost_final(ocp.tf, xf) == -1.5);

  const auto [g0, u0] = ocp.initial_guess(0.0);
  const auto [gf, uf] = ocp.initial_guess(ocp.tf);
  CHECK(g0(0) == doctest::Approx(1.0));
  CHECK(gf(0) == doctest::Approx(1.5));
  CHECK(gf(1) == doctest::Approx(2.0));
  CHECK(gf(4) == doctest::Approx(1.0 - OrbitRaisingConstants::mass_rate * ocp.tf));
  CHECK(u0(0) == doctest::Approx(0.0));
  CHECK(uf(0) == doctest::Approx(M_PI));

  // Circular orbit with no thrust contribution along v_r: v_r' = T sin(beta) / m.
  Vec u(1);
  u << M_PI / 2;
  const Vec f = ocp.dynamics(0.0, x0, u);
  CHECK(f(2) == doctest::Approx(OrbitRaisingConstants::thrust));
  CHECK(f(4) == doctest::Approx(-OrbitRaisingConstants::mass_rate));
}

TEST_CASE("nonlinear IVP analytic solution") {
  const auto [ocp, truth] = nonlinear_ivp();
  CHECK_NOTHROW(ocp.validate());
  CHECK(truth.state(0.0)(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(truth.state(2.0)(0) == doctest::Approx(0.00896379680285788).epsilon(1e-12));
  CHECK(truth.costate(2.0)(0) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(truth.costate(0.0)(0) == doctest::Approx(-0.0119249).epsilon(1e-5));

  // x* solves the dynamics, lambda* the adjoint equation, and u* makes the
  // Hamiltonian stationary.
  const double h = 1e-5;
  for (double t : {0.1, 0.5, 1.0, 1.7}) {
    const Vec x = truth.state(t), u = truth.control(t), lam = truth.costate(t);
    const double xdot = (truth.state(t + h)(0) - truth.state(t - h)(0)) / (2 * h);
    const double ldot = (truth.costate(t + h)(0) - truth.costate(t - h)(0)) / (2 * h);
    CHECK(xdot == doctest::Approx(ocp.dynamics(t, x, u)(0)).epsilon(1e-8));
    CHECK(ldot == doctest::Approx(-(ocp.dynamics_jac_x(t, x, u) * lam)(0)).epsilon(1e-8));
    CHECK(std::fabs((ocp.dynamics_jac_u(t, x, u) * lam)(0)) <= 1e-14);
  }
}

TEST_CASE("validate rejects inconsistent definitions") {
  OcpDefinition ocp = nonlinear_ivp().first;
  ocp.n_x = 2;
  CHECK_THROWS_AS(ocp.validate(), std::invalid_argument);

  ocp = nonlinear_ivp().first;
  ocp.tf = ocp.t0;
  CHECK_THROWS_AS(ocp.validate(), std::invalid_argument);

  ocp = nonlinear_ivp().first;
  ocp.boundary_initial_jac = nullptr;
  CHECK_THROWS_AS(ocp.validate(), std::invalid_argument);

  ocp = nonlinear_ivp().first;
  ocp.n_phi0 = 2;
  CHECK_THROWS_AS(ocp.validate(), std::invalid_argument);

  ocp = orbit_raising();
  ocp.dynamics_jac_u = [](double, const Vec&, const Vec&) { return Mat(Mat::Zero(5, 2)); };
  CHECK_THROWS_AS(ocp.validate(), std::invalid_argument);
}

TEST_CASE("problem_by_name") {
  CHECK(problem_by_name("orbit-raising").first.name == "orbit-raising");
  CHECK_FALSE(problem_by_name("orbit-raising").second.has_value());
  CHECK(problem_by_name("nonlinear-ivp").second.has_value());
  CHECK_THROWS_AS(problem_by_name("brachistochrone"), std::invalid_argument);
}
