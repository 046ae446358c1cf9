#include "lobatto/transcribe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobatto {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(Method method) {
  switch (method) {
    case Method::NewLobatto:
      return "new-lobatto";
    case Method::StandardLobatto:
      return "standard-lobatto";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "new-lobatto") return Method::NewLobatto;
  if (name == "standard-lobatto") return Method::StandardLobatto;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected new-lobatto or standard-lobatto)");
}

Transcript::Transcript(OcpDefinition ocp, NodeSet ns, Method method)
    : ocp_(std::move(ocp)),
      ns_(std::move(ns)),
      method_(method),
      d_(method == Method::NewLobatto ? build_new_lobatto_D(ns_) : build_standard_lobatto_D(ns_)) {
  ocp_.validate();
  state_tau_ = d_.col_nodes;
}

Index Transcript::state_index(int node, int component) const {
  return static_cast<Index>(node) * ocp_.n_x + component;
}

Index Transcript::control_index(int node, int component) const {
  return static_cast<Index>(num_state_nodes()) * ocp_.n_x + static_cast<Index>(node) * ocp_.n_u +
         component;
}

Index Transcript::defect_row(int node, int component) const {
  return static_cast<Index>(node) * ocp_.n_x + component;
}

double Transcript::state_time(int node) const {
  return half_span() * state_tau_.at(node) + 0.5 * (ocp_.tf + ocp_.t0);
}

std::vector<double> Transcript::state_times() const {
  std::vector<double> t(state_tau_.size());
  for (int i = 0; i < num_state_nodes(); ++i) t[i] = state_time(i);
  return t;
}

Index Transcript::num_variables() const {
  return static_cast<Index>(num_state_nodes()) * ocp_.n_x + static_cast<Index>(ns_.n()) * ocp_.n_u;
}

Index Transcript::num_constraints() const { return num_defects() + ocp_.n_phi0 + ocp_.n_phif; }

Vec Transcript::state_at(const VectorXd& z, int node) const {
  return z.segment(state_index(node, 0), ocp_.n_x);
}

Vec Transcript::control_at(const VectorXd& z, int node) const {
  return z.segment(control_index(node, 0), ocp_.n_u);
}

VectorXd Transcript::pack(const MatrixXd& states, const MatrixXd& controls) const {
  if (states.rows() != num_state_nodes() || states.cols() != ocp_.n_x ||
      controls.rows() != ns_.n() || controls.cols() != ocp_.n_u)
    throw std::invalid_argument("Transcript::pack: sample matrices have wrong shape");
  VectorXd z(num_variables());
  for (int i = 0; i < num_state_nodes(); ++i)
    z.segment(state_index(i, 0), ocp_.n_x) = states.row(i).transpose();
  for (int k = 0; k < ns_.n(); ++k)
    z.segment(control_index(k, 0), ocp_.n_u) = controls.row(k).transpose();
  return z;
}

MatrixXd Transcript::unpack_states(const VectorXd& z) const {
  MatrixXd s(num_state_nodes(), ocp_.n_x);
  for (int i = 0; i < num_state_nodes(); ++i) s.row(i) = state_at(z, i).transpose();
  return s;
}

MatrixXd Transcript::unpack_controls(const VectorXd& z) const {
  MatrixXd c(ns_.n(), ocp_.n_u);
  for (int k = 0; k < ns_.n(); ++k) c.row(k) = control_at(z, k).transpose();
  return c;
}

double Transcript::objective(const VectorXd& z) const {
  const int last = ns_.n() - 1;
  double j = 0.0;
  if (ocp_.endpoint_cost_initial) j += ocp_.endpoint_cost_initial(ocp_.t0, state_at(z, 0));
  if (ocp_.endpoint_cost_final) j += ocp_.endpoint_cost_final(ocp_.tf, state_at(z, last));
  if (ocp_.running_cost) {
    double sum = 0.0;
    for (int k = 0; k < ns_.n(); ++k)
      sum += ns_.weights()[k] * ocp_.running_cost(state_time(k), state_at(z, k), control_at(z, k));
    j += half_span() * sum;
  }
  return j;
}

VectorXd Transcript::objective_gradient(const VectorXd& z) const {
  const int last = ns_.n() - 1;
  const int nx = ocp_.n_x, nu = ocp_.n_u;
  VectorXd g = VectorXd::Zero(num_variables());
  if (ocp_.endpoint_cost_initial)
    g.segment(state_index(0, 0), nx) += ocp_.endpoint_cost_initial_grad(ocp_.t0, state_at(z, 0));
  if (ocp_.endpoint_cost_final)
    g.segment(state_index(last, 0), nx) += ocp_.endpoint_cost_final_grad(ocp_.tf, state_at(z, last));
  if (ocp_.running_cost) {
    for (int k = 0; k < ns_.n(); ++k) {
      const double s = half_span() * ns_.weights()[k];
      const double t = state_time(k);
      const Vec x = state_at(z, k), u = control_at(z, k);
      g.segment(state_index(k, 0), nx) += s * ocp_.running_cost_grad_x(t, x, u);
      g.segment(control_index(k, 0), nu) += s * ocp_.running_cost_grad_u(t, x, u);
    }
  }
  return g;
}

VectorXd Transcript::constraints(const VectorXd& z) const {
  const int nx = ocp_.n_x;
  const MatrixXd x = unpack_states(z);
  const MatrixXd dx = (d_.entries * x) / half_span();
  VectorXd c(num_constraints());
  for (int k = 0; k < ns_.n(); ++k)
    c.segment(defect_row(k, 0), nx) =
        ocp_.dynamics(state_time(k), x.row(k).transpose(), control_at(z, k)) - dx.row(k).transpose();
  Index row = num_defects();
  if (ocp_.boundary_initial) {
    c.segment(row, ocp_.n_phi0) = ocp_.boundary_initial(ocp_.t0, x.row(0).transpose());
    row += ocp_.n_phi0;
  }
  if (ocp_.boundary_final)
    c.segment(row, ocp_.n_phif) = ocp_.boundary_final(ocp_.tf, x.row(ns_.n() - 1).transpose());
  return c;
}

MatrixXd Transcript::jacobian(const VectorXd& z) const {
  const int nx = ocp_.n_x, nu = ocp_.n_u;
  MatrixXd j = MatrixXd::Zero(num_constraints(), num_variables());
  const double scale = 1.0 / half_span();
  for (int k = 0; k < ns_.n(); ++k) {
    for (int i = 0; i < num_state_nodes(); ++i) {
      const double dki = d_.entries(k, i);
      if (dki == 0.0) continue;
      for (int c = 0; c < nx; ++c) j(defect_row(k, c), state_index(i, c)) -= scale * dki;
    }
    const double t = state_time(k);
    const Vec x = state_at(z, k), u = control_at(z, k);
    j.block(defect_row(k, 0), state_index(k, 0), nx, nx) += ocp_.dynamics_jac_x(t, x, u);
    j.block(defect_row(k, 0), control_index(k, 0), nx, nu) = ocp_.dynamics_jac_u(t, x, u);
  }
  Index row = num_defects();
  if (ocp_.boundary_initial) {
    j.block(row, state_index(0, 0), ocp_.n_phi0, nx) = ocp_.boundary_initial_jac(ocp_.t0, state_at(z, 0));
    row += ocp_.n_phi0;
  }
  if (ocp_.boundary_final) {
    const int last = ns_.n() - 1;
    j.block(row, state_index(last, 0), ocp_.n_phif, nx) =
        ocp_.boundary_final_jac(ocp_.tf, state_at(z, last));
  }
  return j;
}

VectorXd Transcript::initial_point() const {
  MatrixXd states(num_state_nodes(), ocp_.n_x), controls(ns_.n(), ocp_.n_u);
  for (int i = 0; i < num_state_nodes(); ++i) {
    const auto [x, u] = ocp_.initial_guess(state_time(i));
    states.row(i) = x.transpose();
    if (i < ns_.n()) controls.row(i) = u.transpose();
  }
  return pack(states, controls);
}

MatrixXd extract_costates(const Transcript& t, const VectorXd& raw_multipliers, const NodeSet& ns) {
  if (raw_multipliers.size() != t.num_constraints())
    throw std::invalid_argument("extract_costates: multiplier vector has wrong length");
  const int nx = t.ocp().n_x;
  const double span = t.ocp().tf - t.ocp().t0;
  MatrixXd lambda(ns.n(), nx);
  for (int k = 0; k < ns.n(); ++k)
    for (int c = 0; c < nx; ++c)
      lambda(k, c) = 2.0 * raw_multipliers(t.defect_row(k, c)) / (ns.weights()[k] * span);
  return lambda;
}

Solution make_solution(const Transcript& t, const VectorXd& z, const VectorXd& raw_multipliers) {
  Solution s;
  s.times = t.state_times();
  s.states = t.unpack_states(z);
  s.controls = t.unpack_controls(z);
  s.costates = extract_costates(t, raw_multipliers, t.nodes());
  s.multipliers_raw = raw_multipliers;
  s.nu_initial = raw_multipliers.segment(t.num_defects(), t.ocp().n_phi0);
  s.nu_final = raw_multipliers.segment(t.num_defects() + t.ocp().n_phi0, t.ocp().n_phif);
  s.objective_value = t.objective(z);
  s.kkt_residual = kkt_norm(t, z, raw_multipliers);
  return s;
}

double KktReport::max() const {
  return std::max({state_equation, adjoint, exceptional, control, boundary});
}

DiffMatrix adjoint_matrix(const Transcript& t) {
  const NodeSet& ns = t.nodes();
  if (t.method() == Method::NewLobatto) return build_dual_D(ns, t.diff_matrix());
  const int n = ns.n();
  const auto w = ns.weights();
  const MatrixXd& d = t.diff_matrix().entries;
  MatrixXd dd(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) dd(k, i) = -(w[i] / w[k]) * d(i, k);
  dd(0, 0) -= 1.0 / w[0];
  dd(n - 1, n - 1) += 1.0 / w[n - 1];
  std::vector<double> nodes(ns.collocation().begin(), ns.collocation().end());
  return DiffMatrix{std::move(dd), nodes, nodes, MatrixKind::Dual};
}

VectorXd exceptional_condition(const NodeSet& ns, const DiffMatrix& d, const MatrixXd& samples) {
  if (d.kind != MatrixKind::NewLobatto) throw std::invalid_argument("exceptional_condition: needs NewLobatto D");
  if (samples.rows() != ns.n()) throw std::invalid_argument("exceptional_condition: need N samples");
  const Index xi = ns.exceptional_index();
  VectorXd out = VectorXd::Zero(samples.cols());
  for (int i = 0; i < ns.n(); ++i) out += ns.weights()[i] * d.entries(i, xi) * samples.row(i).transpose();
  return out;
}

KktReport kkt_residuals(const Transcript& t, const Solution& sol, const NodeSet& ns,
                        const DiffMatrix& d, const DiffMatrix& dual) {
  const OcpDefinition& ocp = t.ocp();
  const int n = ns.n(), last = n - 1;
  const auto w = ns.weights();
  const double hs = t.half_span();
  const MatrixXd& lam = sol.costates;
  const MatrixXd dx = d.entries * sol.states;       // N x n_x
  const MatrixXd dlam = dual.entries * lam;         // N x n_x

  KktReport rep{0.0, 0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const double tk = t.state_time(k);
    const Vec x = sol.states.row(k).transpose();
    const Vec u = sol.controls.row(k).transpose();
    const Vec lk = lam.row(k).transpose();
    const Mat fx = ocp.dynamics_jac_x(tk, x, u);
    const Mat fu = ocp.dynamics_jac_u(tk, x, u);

    const Vec r_state = hs * w[k] * ocp.dynamics(tk, x, u) - w[k] * dx.row(k).transpose();
    rep.state_equation = std::max(rep.state_equation, r_state.lpNorm<Eigen::Infinity>());

    Vec grad_x = hs * w[k] * (fx.transpose() * lk);
    Vec grad_u = hs * w[k] * (fu.transpose() * lk);
    if (ocp.running_cost) {
      grad_x += hs * w[k] * ocp.running_cost_grad_x(tk, x, u);
      grad_u += hs * w[k] * ocp.running_cost_grad_u(tk, x, u);
    }
    if (k == 0) {
      if (ocp.endpoint_cost_initial) grad_x += ocp.endpoint_cost_initial_grad(ocp.t0, x);
      if (ocp.boundary_initial) grad_x += ocp.boundary_initial_jac(ocp.t0, x).transpose() * sol.nu_initial;
    }
    if (k == last) {
      if (ocp.endpoint_cost_final) grad_x += ocp.endpoint_cost_final_grad(ocp.tf, x);
      if (ocp.boundary_final) grad_x += ocp.boundary_final_jac(ocp.tf, x).transpose() * sol.nu_final;
    }
    Vec r_adj = grad_x + w[k] * dlam.row(k).transpose();
    if (k == last) r_adj -= lam.row(last).transpose();
    if (k == 0) r_adj += lam.row(0).transpose();
    rep.adjoint = std::max(rep.adjoint, r_adj.lpNorm<Eigen::Infinity>());
    rep.control = std::max(rep.control, grad_u.lpNorm<Eigen::Infinity>());
  }
  if (d.kind == MatrixKind::NewLobatto)
    rep.exceptional = exceptional_condition(ns, d, lam).lpNorm<Eigen::Infinity>();
  if (ocp.boundary_initial)
    rep.boundary = std::max(rep.boundary, ocp.boundary_initial(ocp.t0, sol.states.row(0).transpose())
                                              .lpNorm<Eigen::Infinity>());
  if (ocp.boundary_final)
    rep.boundary = std::max(rep.boundary, ocp.boundary_final(ocp.tf, sol.states.row(last).transpose())
                                              .lpNorm<Eigen::Infinity>());
  return rep;
}

MatrixXd legendre_coefficients(const NodeSet& ns, const MatrixXd& samples) {
  const int n = ns.n();
  if (samples.rows() != n) throw std::invalid_argument("legendre_coefficients: need N samples");
  MatrixXd coeffs(n, samples.cols());
  for (int j = 0; j < n; ++j) {
    VectorXd num = VectorXd::Zero(samples.cols());
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
      const double p = legendre_eval(j, ns.collocation()[k]).value;
      num += ns.weights()[k] * p * samples.row(k).transpose();
      norm += ns.weights()[k] * p * p;
    }
    coeffs.row(j) = (num / norm).transpose();
  }
  return coeffs;
}

}  // namespace lobatto
