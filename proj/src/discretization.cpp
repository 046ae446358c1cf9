#include "lobatto/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lobatto/kernels.hpp"

namespace lobatto {

namespace {

constexpr double kMinNodeGap = 1e-12;

std::size_t find_node(std::span<const double> nodes, double tau) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == tau) return i;
  std::ostringstream msg;
  msg.precision(17);
  msg << "derivative_matrix: row node " << tau << " is not a basis node";
  throw std::invalid_argument(msg.str());
}

}  // namespace

LagrangeBasis::LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  const std::size_t m = nodes_.size();
  if (m == 0) throw std::invalid_argument("LagrangeBasis: no nodes");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (std::fabs(nodes_[i] - nodes_[j]) <= kMinNodeGap) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "LagrangeBasis: nodes " << i << " (" << nodes_[i] << ") and " << j
            << " (" << nodes_[j] << ") coincide";
        throw std::invalid_argument(msg.str());
      }
  weights_.assign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) weights_[i] /= (nodes_[i] - nodes_[j]);
}

double LagrangeBasis::eval(std::size_t i, double tau) const {
  if (i >= nodes_.size()) throw std::out_of_range("LagrangeBasis::eval: index");
  return eval_all(tau)(static_cast<Eigen::Index>(i));
}

Eigen::VectorXd LagrangeBasis::eval_all(double tau) const {
  const auto m = static_cast<Eigen::Index>(nodes_.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i)
    if (tau == nodes_[i]) {
      out(i) = 1.0;
      return out;
    }
  double denom = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    out(i) = weights_[i] / (tau - nodes_[i]);
    denom += out(i);
  }
  return out / denom;
}

Eigen::MatrixXd LagrangeBasis::derivative_matrix(std::span<const double> row_nodes) const {
  const auto m = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXd d(static_cast<Eigen::Index>(row_nodes.size()), m);
  for (Eigen::Index k = 0; k < d.rows(); ++k) {
    const std::size_t self = find_node(nodes_, row_nodes[k]);
    double diag = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (static_cast<std::size_t>(i) == self) continue;
      d(k, i) = (weights_[i] / weights_[self]) / (nodes_[self] - nodes_[i]);
      diag -= d(k, i);
    }
    d(k, static_cast<Eigen::Index>(self)) = diag;
  }
  return d;
}

LagrangeBasis build_basis(std::vector<double> nodes) { return LagrangeBasis(std::move(nodes)); }

const char* to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::NewLobatto:
      return "new";
    case MatrixKind::StandardLobatto:
      return "standard";
    case MatrixKind::Dual:
      return "dual";
  }
  return "unknown";
}

DiffMatrix build_new_lobatto_D(const NodeSet& ns) {
  std::vector<double> rows(ns.collocation().begin(), ns.collocation().end());
  LagrangeBasis basis(ns.abscissas());
  DiffMatrix d{basis.derivative_matrix(rows), rows, ns.abscissas(), MatrixKind::NewLobatto};
  return d;
}

DiffMatrix build_standard_lobatto_D(const NodeSet& ns) {
  std::vector<double> nodes(ns.collocation().begin(), ns.collocation().end());
  LagrangeBasis basis(nodes);
  return DiffMatrix{basis.derivative_matrix(nodes), nodes, nodes,
                    MatrixKind::StandardLobatto};
}

DiffMatrix build_dual_D(const NodeSet& ns, const DiffMatrix& d) {
  const int n = ns.n();
  if (d.kind != MatrixKind::NewLobatto || d.rows() != n || d.cols() != n + 1)
    throw std::invalid_argument("build_dual_D: expected the new Lobatto matrix of this node set");
  const auto w = ns.weights();
  Eigen::MatrixXd dd(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) dd(k, i) = -(w[i] / w[k]) * d.entries(i, k);
  dd(0, 0) -= 1.0 / w[0];
  dd(n - 1, n - 1) += 1.0 / w[n - 1];
  std::vector<double> nodes(ns.collocation().begin(), ns.collocation().end());
  return DiffMatrix{std::move(dd), nodes, nodes, MatrixKind::Dual};
}

double verify_definition(const DiffMatrix& d, int order) {
  if (order < 0) throw std::invalid_argument("verify_definition: negative order");
  const Eigen::Index m = d.cols(), r = d.rows();
  Eigen::MatrixXd v(m, order + 1), vp(r, order + 1);
  for (Eigen::Index i = 0; i < m; ++i)
    for (int p = 0; p <= order; ++p) v(i, p) = std::pow(d.col_nodes[i], p);
  for (Eigen::Index k = 0; k < r; ++k)
    for (int p = 0; p <= order; ++p)
      vp(k, p) = p == 0 ? 0.0 : p * std::pow(d.row_nodes[k], p - 1);
  return (d.entries * v - vp).cwiseAbs().maxCoeff();
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_threshold) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > rel_threshold * s(0)).count());
}

double condition_number(const Eigen::MatrixXd& m, double rel_threshold) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  const int rank = numerical_rank(m, rel_threshold);
  if (rank == 0) return std::numeric_limits<double>::infinity();
  return s(0) / s(rank - 1);
}

std::vector<double> exceptional_lagrange(const NodeSet& ns, std::span<const double> tau) {
  double denom = 1.0;
  for (double t : ns.collocation()) denom *= (ns.exceptional() - t);
  std::vector<double> out(tau.size());
  kernels::node_product(ns.collocation(), 1.0 / denom, tau, out);
  return out;
}

double runge_bound(const NodeSet& ns, int grid_size) {
  if (grid_size < 1001) throw std::invalid_argument("runge_bound: grid_size must be >= 1001");
  const std::vector<double> grid = uniform_grid(-1.0, 1.0, grid_size);
  return kernels::max_abs(exceptional_lagrange(ns, grid));
}

}  // namespace lobatto
