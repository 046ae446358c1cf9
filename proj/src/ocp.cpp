#include "lobatto/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lobatto {

namespace {

double rel_err(double a, double fd) { return std::fabs(a - fd) / std::max(1.0, std::fabs(fd)); }

double max_rel_err(const Mat& a, const Mat& fd) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) e = std::max(e, rel_err(a(i, j), fd(i, j)));
  return e;
}

// Central-difference Jacobian of a vector function of one argument.
template <class F>
Mat fd_jacobian(F&& f, const Vec& at, double h) {
  const Vec f0 = f(at);
  Mat j(f0.size(), at.size());
  for (Eigen::Index c = 0; c < at.size(); ++c) {
    Vec p = at, m = at;
    p(c) += h;
    m(c) -= h;
    j.col(c) = (f(p) - f(m)) / (2.0 * h);
  }
  return j;
}

Vec scalar_as_vec(double v) { return Vec::Constant(1, v); }

}  // namespace

void OcpDefinition::validate() const {
  auto fail = [this](const std::string& what) {
    throw std::invalid_argument("OcpDefinition '" + name + "': " + what);
  };
  if (n_x <= 0 || n_u <= 0) fail("n_x and n_u must be positive");
  if (!(tf > t0)) fail("tf must exceed t0");
  if (!dynamics || !dynamics_jac_x || !dynamics_jac_u) fail("dynamics and its Jacobians are required");
  if (!initial_guess) fail("initial_guess is required");
  if (running_cost && (!running_cost_grad_x || !running_cost_grad_u))
    fail("running_cost needs both gradients");
  if (endpoint_cost_initial && !endpoint_cost_initial_grad) fail("initial endpoint cost needs a gradient");
  if (endpoint_cost_final && !endpoint_cost_final_grad) fail("final endpoint cost needs a gradient");
  if ((n_phi0 > 0) != static_cast<bool>(boundary_initial) ||
      static_cast<bool>(boundary_initial) != static_cast<bool>(boundary_initial_jac))
    fail("boundary_initial, its Jacobian and n_phi0 must be given together");
  if ((n_phif > 0) != static_cast<bool>(boundary_final) ||
      static_cast<bool>(boundary_final) != static_cast<bool>(boundary_final_jac))
    fail("boundary_final, its Jacobian and n_phif must be given together");

  const auto [x, u] = initial_guess(t0);
  if (x.size() != n_x || u.size() != n_u) fail("initial_guess has wrong dimensions");
  if (dynamics(t0, x, u).size() != n_x) fail("dynamics returns wrong dimension");
  const Mat fx = dynamics_jac_x(t0, x, u), fu = dynamics_jac_u(t0, x, u);
  if (fx.rows() != n_x || fx.cols() != n_x) fail("dynamics_jac_x has wrong shape");
  if (fu.rows() != n_x || fu.cols() != n_u) fail("dynamics_jac_u has wrong shape");
  if (running_cost && (running_cost_grad_x(t0, x, u).size() != n_x ||
                       running_cost_grad_u(t0, x, u).size() != n_u))
    fail("running cost gradients have wrong dimensions");
  if (endpoint_cost_initial && endpoint_cost_initial_grad(t0, x).size() != n_x)
    fail("initial endpoint gradient has wrong dimension");
  if (endpoint_cost_final && endpoint_cost_final_grad(tf, x).size() != n_x)
    fail("final endpoint gradient has wrong dimension");
  if (boundary_initial) {
    const Mat j = boundary_initial_jac(t0, x);
    if (boundary_initial(t0, x).size() != n_phi0 || j.rows() != n_phi0 || j.cols() != n_x)
      fail("boundary_initial has wrong dimensions");
  }
  if (boundary_final) {
    const Mat j = boundary_final_jac(tf, x);
    if (boundary_final(tf, x).size() != n_phif || j.rows() != n_phif || j.cols() != n_x)
      fail("boundary_final has wrong dimensions");
  }
}

double derivative_check(const OcpDefinition& ocp, int points, double h, unsigned seed) {
  ocp.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), jitter(-0.1, 0.1);
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    const double t = ocp.t0 + (ocp.tf - ocp.t0) * (0.05 + 0.9 * unit(rng));
    auto [x, u] = ocp.initial_guess(t);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += jitter(rng);
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) += jitter(rng);

    worst = std::max(worst, max_rel_err(ocp.dynamics_jac_x(t, x, u),
                                        fd_jacobian([&](const Vec& xx) { return ocp.dynamics(t, xx, u); }, x, h)));
    worst = std::max(worst, max_rel_err(ocp.dynamics_jac_u(t, x, u),
                                        fd_jacobian([&](const Vec& uu) { return ocp.dynamics(t, x, uu); }, u, h)));
    if (ocp.running_cost) {
      const Mat gx = fd_jacobian([&](const Vec& xx) { return scalar_as_vec(ocp.running_cost(t, xx, u)); }, x, h);
      const Mat gu = fd_jacobian([&](const Vec& uu) { return scalar_as_vec(ocp.running_cost(t, x, uu)); }, u, h);
      worst = std::max(worst, max_rel_err(ocp.running_cost_grad_x(t, x, u).transpose(), gx));
      worst = std::max(worst, max_rel_err(ocp.running_cost_grad_u(t, x, u).transpose(), gu));
    }
    if (ocp.endpoint_cost_initial) {
      const Mat g = fd_jacobian([&](const Vec& xx) { return scalar_as_vec(ocp.endpoint_cost_initial(t, xx)); }, x, h);
      worst = std::max(worst, max_rel_err(ocp.endpoint_cost_initial_grad(t, x).transpose(), g));
    }
    if (ocp.endpoint_cost_final) {
      const Mat g = fd_jacobian([&](const Vec& xx) { return scalar_as_vec(ocp.endpoint_cost_final(t, xx)); }, x, h);
      worst = std::max(worst, max_rel_err(ocp.endpoint_cost_final_grad(t, x).transpose(), g));
    }
    if (ocp.boundary_initial)
      worst = std::max(worst, max_rel_err(ocp.boundary_initial_jac(t, x),
                                          fd_jacobian([&](const Vec& xx) { return ocp.boundary_initial(t, xx); }, x, h)));
    if (ocp.boundary_final)
      worst = std::max(worst, max_rel_err(ocp.boundary_final_jac(t, x),
                                          fd_jacobian([&](const Vec& xx) { return ocp.boundary_final(t, xx); }, x, h)));
  }
  return worst;
}

OcpDefinition orbit_raising() {
  using C = OrbitRaisingConstants;
  OcpDefinition ocp;
  ocp.name = "orbit-raising";
  ocp.n_x = 5;
  ocp.n_u = 1;
  ocp.t0 = 0.0;
  ocp.tf = C::tf;

  ocp.dynamics = [](double, const Vec& x, const Vec& u) {
    const double r = x(0), vr = x(2), vt = x(3), m = x(4), beta = u(0);
    Vec f(5);
    f << vr, vt / r, vt * vt / r - C::mu / (r * r) + C::thrust / m * std::sin(beta),
        -vr * vt / r + C::thrust / m * std::cos(beta), -C::mass_rate;
    return f;
  };
  ocp.dynamics_jac_x = [](double, const Vec& x, const Vec& u) {
    const double r = x(0), vr = x(2), vt = x(3), m = x(4), beta = u(0);
    Mat j = Mat::Zero(5, 5);
    j(0, 2) = 1.0;
    j(1, 0) = -vt / (r * r);
    j(1, 3) = 1.0 / r;
    j(2, 0) = -vt * vt / (r * r) + 2.0 * C::mu / (r * r * r);
    j(2, 3) = 2.0 * vt / r;
    j(2, 4) = -C::thrust * std::sin(beta) / (m * m);
    j(3, 0) = vr * vt / (r * r);
    j(3, 2) = -vt / r;
    j(3, 3) = -vr / r;
    j(3, 4) = -C::thrust * std::cos(beta) / (m * m);
    return j;
  };
  ocp.dynamics_jac_u = [](double, const Vec& x, const Vec& u) {
    const double m = x(4), beta = u(0);
    Mat j = Mat::Zero(5, 1);
    j(2, 0) = C::thrust / m * std::cos(beta);
    j(3, 0) = -C::thrust / m * std::sin(beta);
    return j;
  };

  ocp.endpoint_cost_final = [](double, const Vec& x) { return -x(0); };
  ocp.endpoint_cost_final_grad = [](double, const Vec&) {
    Vec g = Vec::Zero(5);
    g(0) = -1.0;
    return g;
  };

  ocp.n_phi0 = 5;
  ocp.boundary_initial = [](double, const Vec& x) {
    Vec x0(5);
    x0 << 1.0, 0.0, 0.0, 1.0, 1.0;
    return Vec(x - x0);
  };
  ocp.boundary_initial_jac = [](double, const Vec&) { return Mat(Mat::Identity(5, 5)); };

  ocp.n_phif = 2;
  ocp.boundary_final = [](double, const Vec& x) {
    Vec r(2);
    r << x(2), x(3) - std::sqrt(C::mu / x(0));
    return r;
  };
  ocp.boundary_final_jac = [](double, const Vec& x) {
    Mat j = Mat::Zero(2, 5);
    j(0, 2) = 1.0;
    j(1, 0) = 0.5 * std::sqrt(C::mu) * std::pow(x(0), -1.5);
    j(1, 3) = 1.0;
    return j;
  };

  ocp.initial_guess = [](double t) {
    const double s = t / C::tf;
    Vec x(5), u(1);
    x << 1.0 + 0.5 * s, 2.0 * s, 0.0, 1.0, 1.0 - C::mass_rate * t;
    u << std::numbers::pi * s;
    return std::pair{x, u};
  };
  return ocp;
}

std::pair<OcpDefinition, AnalyticTruth> nonlinear_ivp() {
  OcpDefinition ocp;
  ocp.name = "nonlinear-ivp";
  ocp.n_x = 1;
  ocp.n_u = 1;
  ocp.t0 = 0.0;
  ocp.tf = 2.0;

  ocp.dynamics = [](double, const Vec& x, const Vec& u) {
    return scalar_as_vec(2.5 * (x(0) * u(0) - x(0) - u(0) * u(0)));
  };
  ocp.dynamics_jac_x = [](double, const Vec&, const Vec& u) {
    return Mat(Mat::Constant(1, 1, 2.5 * (u(0) - 1.0)));
  };
  ocp.dynamics_jac_u = [](double, const Vec& x, const Vec& u) {
    return Mat(Mat::Constant(1, 1, 2.5 * (x(0) - 2.0 * u(0))));
  };
  ocp.endpoint_cost_final = [](double, const Vec& x) { return -x(0); };
  ocp.endpoint_cost_final_grad = [](double, const Vec&) { return scalar_as_vec(-1.0); };
  ocp.n_phi0 = 1;
  ocp.boundary_initial = [](double, const Vec& x) { return scalar_as_vec(x(0) - 1.0); };
  ocp.boundary_initial_jac = [](double, const Vec&) { return Mat(Mat::Identity(1, 1)); };
  ocp.initial_guess = [](double t) {
    return std::pair{scalar_as_vec(1.0 - 0.5 * t), scalar_as_vec(0.25)};
  };

  AnalyticTruth truth;
  auto state = [](double t) { return 4.0 / (1.0 + 3.0 * std::exp(2.5 * t)); };
  truth.state = [state](double t) { return scalar_as_vec(state(t)); };
  truth.control = [state](double t) { return scalar_as_vec(0.5 * state(t)); };
  truth.costate = [](double t) {
    const double num = std::exp(2.0 * std::log(1.0 + 3.0 * std::exp(2.5 * t)) - 2.5 * t);
    return scalar_as_vec(-num / (6.0 + 9.0 * std::exp(5.0) + std::exp(-5.0)));
  };
  return {std::move(ocp), std::move(truth)};
}

std::pair<OcpDefinition, std::optional<AnalyticTruth>> problem_by_name(const std::string& name) {
  if (name == "orbit-raising") return {orbit_raising(), std::nullopt};
  if (name == "nonlinear-ivp") {
    auto [ocp, truth] = nonlinear_ivp();
    return {std::move(ocp), std::move(truth)};
  }
  throw std::invalid_argument("unknown problem '" + name +
                              "' (expected orbit-raising or nonlinear-ivp)");
}

}  // namespace lobatto
