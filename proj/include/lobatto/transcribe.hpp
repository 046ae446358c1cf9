#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lobatto/discretization.hpp"
#include "lobatto/nlpsolve.hpp"
#include "lobatto/ocp.hpp"
#include "lobatto/orthopoly.hpp"

namespace lobatto {

enum class Method { NewLobatto, StandardLobatto };

/// CLI spelling: "new-lobatto" / "standard-lobatto".
const char* to_string(Method method);
/// Throws std::invalid_argument for unknown names.
Method method_from_string(const std::string& name);

/// Direct transcription of a fixed-time OCP into an equality NLP.
///
/// Decision vector: states at every discretization node (the N Lobatto nodes,
/// then the exceptional sample for NewLobatto), followed by controls at the N
/// Lobatto nodes. Constraint vector: the N * n_x defects
///   f(t_k, x_k, u_k) - 2 / (tf - t0) sum_i D(k, i) x_i,
/// ordered node-major, then the initial and final boundary rows.
/// Objective: Psi_0 + Psi_f + (tf - t0) / 2 sum_k w_k h_k.
class Transcript final : public EqualityNlp {
 public:
  /// Validates `ocp` and throws std::invalid_argument on inconsistent sizes.
  Transcript(OcpDefinition ocp, NodeSet ns, Method method);

  const OcpDefinition& ocp() const { return ocp_; }
  const NodeSet& nodes() const { return ns_; }
  Method method() const { return method_; }
  const DiffMatrix& diff_matrix() const { return d_; }

  int num_collocation() const { return ns_.n(); }
  /// N + 1 for NewLobatto, N for StandardLobatto.
  int num_state_nodes() const { return static_cast<int>(state_tau_.size()); }
  int num_defects() const { return ns_.n() * ocp_.n_x; }

  Eigen::Index state_index(int node, int component) const;
  Eigen::Index control_index(int node, int component) const;
  Eigen::Index defect_row(int node, int component) const;

  /// Physical time of state node i (internal order: collocation, then the
  /// exceptional sample).
  double state_time(int node) const;
  std::vector<double> state_times() const;
  double half_span() const { return 0.5 * (ocp_.tf - ocp_.t0); }

  /// Decision vector from per-node samples: states (num_state_nodes x n_x)
  /// and controls (N x n_u).
  Eigen::VectorXd pack(const Eigen::MatrixXd& states, const Eigen::MatrixXd& controls) const;
  Eigen::MatrixXd unpack_states(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd unpack_controls(const Eigen::VectorXd& z) const;

  Eigen::Index num_variables() const override;
  Eigen::Index num_constraints() const override;
  double objective(const Eigen::VectorXd& z) const override;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& z) const override;
  Eigen::VectorXd constraints(const Eigen::VectorXd& z) const override;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const override;
  /// OCP initial guess sampled at the nodes.
  Eigen::VectorXd initial_point() const override;

 private:
  Vec state_at(const Eigen::VectorXd& z, int node) const;
  Vec control_at(const Eigen::VectorXd& z, int node) const;

  OcpDefinition ocp_;
  NodeSet ns_;
  Method method_;
  DiffMatrix d_;
  std::vector<double> state_tau_;
};

/// Discrete trajectory recovered from an NLP solution. Rows are in internal
/// node order (collocation nodes ascending, then the exceptional sample).
struct Solution {
  std::vector<double> times;      // num_state_nodes entries
  Eigen::MatrixXd states;         // num_state_nodes x n_x
  Eigen::MatrixXd controls;       // N x n_u
  Eigen::MatrixXd costates;       // N x n_x
  Eigen::VectorXd multipliers_raw;
  Eigen::VectorXd nu_initial;
  Eigen::VectorXd nu_final;
  double objective_value = 0.0;
  double kkt_residual = 0.0;
};

/// Costates at the N Lobatto nodes: lambda_k = 2 y_k / (w_k (tf - t0)), where
/// y_k are the defect multipliers of node k.
Eigen::MatrixXd extract_costates(const Transcript& t, const Eigen::VectorXd& raw_multipliers,
                                 const NodeSet& ns);

Solution make_solution(const Transcript& t, const Eigen::VectorXd& z,
                       const Eigen::VectorXd& raw_multipliers);

/// Infinity norms of the discrete optimality conditions written with the KKT
/// Hamiltonian H_k = (tf - t0)/2 w_k (h_k + lambda_k^T f_k) plus the endpoint
/// terms at nodes 1 and N.
struct KktReport {
  double state_equation;    // grad_lambda H_k - w_k sum_i D_ki x_i
  double adjoint;           // grad_x H_k + w_k sum_i Dd_ki lambda_i - (lambda_N d_Nk - lambda_1 d_1k)
  double exceptional;       // sum_i w_i lambda_i D_{i,xi}; zero for StandardLobatto
  double control;           // grad_u H_k
  double boundary;          // boundary equality rows

  double max() const;
};

/// `d` is the transcript's differentiation matrix and `dual` the matching
/// adjoint matrix (`build_dual_D` for NewLobatto).
KktReport kkt_residuals(const Transcript& t, const Solution& sol, const NodeSet& ns,
                        const DiffMatrix& d, const DiffMatrix& dual);

/// Adjoint matrix for either method: the NewLobatto dual matrix, or the same
/// formula applied to the square matrix.
DiffMatrix adjoint_matrix(const Transcript& t);

/// Sum_i w_i lambda(tau_i) D_{i,xi} for arbitrary samples (one column per
/// state). Requires a NewLobatto matrix.
Eigen::VectorXd exceptional_condition(const NodeSet& ns, const DiffMatrix& d,
                                      const Eigen::MatrixXd& samples);

/// Legendre coefficients c_0..c_{N-1} of the degree N-1 interpolant of
/// `samples` (N rows, one column per component) using the discrete
/// Gauss-Lobatto inner product.
Eigen::MatrixXd legendre_coefficients(const NodeSet& ns, const Eigen::MatrixXd& samples);

}  // namespace lobatto
