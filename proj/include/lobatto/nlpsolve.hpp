#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lobatto {

/// Smooth equality-constrained NLP:  minimize f(z)  subject to  c(z) = 0.
///
/// Multiplier convention: L(z, y) = f(z) + y^T c(z).
class EqualityNlp {
 public:
  virtual ~EqualityNlp() = default;

  virtual Eigen::Index num_variables() const = 0;
  virtual Eigen::Index num_constraints() const = 0;
  virtual double objective(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd objective_gradient(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd constraints(const Eigen::VectorXd& z) const = 0;
  /// Dense num_constraints x num_variables Jacobian.
  virtual Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd initial_point() const = 0;
};

struct SolverOptions {
  double kkt_tolerance = 1e-10;
  int max_iterations = 200;
  double regularization_initial = 1e-8;
  double line_search_shrink = 0.5;
  double min_step = 1e-12;

  /// Throws std::invalid_argument unless every field is positive,
  /// kkt_tolerance < 1e-4 and line_search_shrink < 1.
  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations, SingularKkt };

const char* to_string(SolveStatus status);

struct StepRecord {
  int iteration;
  double kkt_norm;       // infinity norm of (grad L, c) before the step
  double merit;          // 2-norm of the same vector
  double step_length;    // 0 when the line search failed
  double regularization; // primal regularization used for the step
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  double final_kkt_norm = 0.0;
  std::vector<StepRecord> step_history;

  bool converged() const { return status == SolveStatus::Converged; }
};

struct SolveOutput {
  Eigen::VectorXd z;
  Eigen::VectorXd multipliers;
  SolveReport report;
};

/// Damped Newton iteration on the KKT conditions of `nlp`.
///
/// The Lagrangian Hessian is a symmetrized forward difference of the analytic
/// Lagrangian gradient. Each step factors the KKT matrix
///   [H + dw I   J^T ]
///   [J        -dc I ]
/// with dw grown from `regularization_initial` until the inertia is (n, m, 0),
/// and dc switched on when J is rank deficient. The inertia is read off the
/// reduced Hessian (null-space projection, or H + dw I + J^T J / dc) with a
/// Cholesky factorization. Steps are backtracked on ||(grad L, c)||_2.
///
/// Never throws for numerical failure; inspect `report.status`.
SolveOutput solve(const EqualityNlp& nlp, const SolverOptions& opts = {});

/// Infinity norm of (grad_z L(z, y), c(z)).
double kkt_norm(const EqualityNlp& nlp, const Eigen::VectorXd& z, const Eigen::VectorXd& y);

}  // namespace lobatto
