#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lobatto/orthopoly.hpp"

namespace lobatto {

/// Lagrange basis on distinct nodes in barycentric form.
class LagrangeBasis {
 public:
  /// Throws std::invalid_argument naming the offending pair if two nodes are
  /// closer than 1e-12.
  explicit LagrangeBasis(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> barycentric_weights() const { return weights_; }

  /// l_i(tau); exactly the Kronecker delta at the nodes.
  double eval(std::size_t i, double tau) const;

  /// All l_i(tau) at once.
  Eigen::VectorXd eval_all(double tau) const;

  /// Matrix of l_i'(row_node_k) with entry (k, i). Every row node must be one
  /// of the basis nodes.
  Eigen::MatrixXd derivative_matrix(std::span<const double> row_nodes) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

LagrangeBasis build_basis(std::vector<double> nodes);

enum class MatrixKind { NewLobatto, StandardLobatto, Dual };

const char* to_string(MatrixKind kind);

/// Dense differentiation matrix mapping samples on `col_nodes` to derivative
/// samples on `row_nodes`.
struct DiffMatrix {
  Eigen::MatrixXd entries;
  std::vector<double> row_nodes;
  std::vector<double> col_nodes;
  MatrixKind kind;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

/// N x (N+1) matrix over the Lobatto nodes plus the exceptional sample
/// (last column). Rows are the Lobatto nodes.
DiffMatrix build_new_lobatto_D(const NodeSet& ns);

/// Square N x N Lobatto differentiation matrix. Rank N-1.
DiffMatrix build_standard_lobatto_D(const NodeSet& ns);

/// Adjoint differentiation matrix on the Lobatto nodes:
///   Dd(k, i) = delta_ki / w_k (delta_{N,k} - delta_{1,k}) - w_i / w_k D(i, k).
/// Exact for polynomials of degree <= N-2. `d` must be the NewLobatto matrix
/// of `ns`.
DiffMatrix build_dual_D(const NodeSet& ns, const DiffMatrix& d);

/// ||D V - V'||_inf with V the Vandermonde matrix of degrees 0..order on the
/// column nodes and V' its derivative on the row nodes.
double verify_definition(const DiffMatrix& d, int order);

/// Singular values below rel_threshold * sigma_max count as zero.
int numerical_rank(const Eigen::MatrixXd& m, double rel_threshold = 1e-10);

/// sigma_max / sigma_min over the nonzero singular values.
double condition_number(const Eigen::MatrixXd& m, double rel_threshold = 1e-10);

/// max |l_xi(tau)| over a uniform grid on [-1, 1], where l_xi is the Lagrange
/// polynomial of the exceptional sample. Requires grid_size >= 1001.
double runge_bound(const NodeSet& ns, int grid_size);

/// l_xi(tau) = prod_{j in C} (tau - tau_j) / (tau_xi - tau_j) on a grid.
std::vector<double> exceptional_lagrange(const NodeSet& ns, std::span<const double> tau);

}  // namespace lobatto
