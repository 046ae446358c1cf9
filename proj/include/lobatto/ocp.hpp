#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace lobatto {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Fixed-time optimal control problem with equality boundary conditions:
///
///   minimize  Psi_0(t0, x(t0)) + Psi_f(tf, x(tf)) + int h(t, x, u) dt
///   subject to  x' = f(t, x, u),  phi_0(t0, x(t0)) = 0,  phi_f(tf, x(tf)) = 0
///
/// Any cost or boundary term may be left empty, meaning it is absent. All
/// callables must be re-entrant.
struct OcpDefinition {
  using StateFn = std::function<Vec(double t, const Vec& x, const Vec& u)>;
  using StateJacFn = std::function<Mat(double t, const Vec& x, const Vec& u)>;
  using ScalarFn = std::function<double(double t, const Vec& x, const Vec& u)>;
  using GradFn = std::function<Vec(double t, const Vec& x, const Vec& u)>;
  using EndpointFn = std::function<double(double t, const Vec& x)>;
  using EndpointGradFn = std::function<Vec(double t, const Vec& x)>;
  using BoundaryFn = std::function<Vec(double t, const Vec& x)>;
  using BoundaryJacFn = std::function<Mat(double t, const Vec& x)>;
  using GuessFn = std::function<std::pair<Vec, Vec>(double t)>;

  std::string name;
  int n_x = 0;
  int n_u = 0;
  double t0 = 0.0;
  double tf = 1.0;

  StateFn dynamics;
  StateJacFn dynamics_jac_x;  // n_x x n_x
  StateJacFn dynamics_jac_u;  // n_x x n_u

  ScalarFn running_cost;
  GradFn running_cost_grad_x;
  GradFn running_cost_grad_u;

  EndpointFn endpoint_cost_initial;
  EndpointGradFn endpoint_cost_initial_grad;
  EndpointFn endpoint_cost_final;
  EndpointGradFn endpoint_cost_final_grad;

  int n_phi0 = 0;
  BoundaryFn boundary_initial;
  BoundaryJacFn boundary_initial_jac;  // n_phi0 x n_x
  int n_phif = 0;
  BoundaryFn boundary_final;
  BoundaryJacFn boundary_final_jac;  // n_phif x n_x

  GuessFn initial_guess;

  /// Throws std::invalid_argument when sizes or required callables are
  /// inconsistent (checked by evaluating at the initial guess).
  void validate() const;
};

/// Exact solution of a benchmark.
struct AnalyticTruth {
  std::function<Vec(double)> state;
  std::function<Vec(double)> control;
  std::function<Vec(double)> costate;
};

/// Largest relative mismatch between every supplied derivative and its central
/// finite difference (step `h`), over `points` random interior samples drawn
/// around the initial guess. Relative means |a - fd| / max(1, |fd|).
double derivative_check(const OcpDefinition& ocp, int points = 10, double h = 1e-6,
                        unsigned seed = 7);

/// Low-thrust orbit raising with mass as a state: maximize r(tf).
/// States (r, theta, v_r, v_theta, m), control beta.
OcpDefinition orbit_raising();

struct OrbitRaisingConstants {
  static constexpr double tf = 3.32;
  static constexpr double thrust = 0.1405;
  static constexpr double mu = 1.0;
  static constexpr double mass_rate = 0.0749;
};

/// Scalar problem x' = 5/2 (x u - x - u^2), x(0) = 1, minimize -x(2), with
/// its closed-form optimal state, control and costate.
std::pair<OcpDefinition, AnalyticTruth> nonlinear_ivp();

/// Lookup by CLI name ("orbit-raising", "nonlinear-ivp"). Unknown names
/// throw std::invalid_argument.
std::pair<OcpDefinition, std::optional<AnalyticTruth>> problem_by_name(const std::string& name);

}  // namespace lobatto
