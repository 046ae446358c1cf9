#include "lobatto/nlpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobatto {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kHessianStep = 1e-7;
constexpr double kPivotZero = 1e-14;
constexpr double kRankThreshold = 1e-12;
constexpr double kMaxRegularization = 1e10;
constexpr double kRegularizationGrowth = 2.0;
constexpr double kArmijo = 1e-4;

// Inertia test for K = [H + dw I, J^T; J, -dc I]. K has inertia (n, m, 0)
// exactly when its reduced Hessian is positive definite: Z^T (H + dw I) Z
// with Z spanning null(J) when dc == 0 (J must have full row rank), and
// H + dw I + J^T J / dc otherwise.
class ReducedHessian {
 public:
  ReducedHessian(const MatrixXd& hess, const MatrixXd& jac) : hess_(hess), jac_(jac) {
    const Index n = hess.rows(), m = jac.rows();
    scale_ = std::max(1.0, hess.cwiseAbs().maxCoeff());
    if (m == 0) {
      full_rank_ = true;
      z_ = MatrixXd::Identity(n, n);
      return;
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(jac.transpose());
    qr.setThreshold(kRankThreshold);
    full_rank_ = qr.rank() == m;
    if (full_rank_) {
      const MatrixXd q = qr.householderQ();
      z_ = q.rightCols(n - m);
      projected_ = z_.transpose() * hess * z_;
    }
  }

  bool full_rank() const { return full_rank_; }

  bool positive_definite(double dw, double dc) const {
    MatrixXd r;
    if (dc > 0.0) {
      r = hess_ + jac_.transpose() * jac_ / dc;
    } else {
      if (!full_rank_) return false;
      r = jac_.rows() == 0 ? hess_ : projected_;
    }
    if (r.rows() == 0) return true;
    r.diagonal().array() += dw;
    const Eigen::LLT<MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) return false;
    const double pivot = llt.matrixLLT().diagonal().minCoeff();
    return pivot * pivot > kPivotZero * std::max(scale_, dw);
  }

 private:
  const MatrixXd& hess_;
  const MatrixXd& jac_;
  double scale_ = 1.0;
  bool full_rank_ = false;
  MatrixXd z_;
  MatrixXd projected_;
};

VectorXd lagrangian_gradient(const EqualityNlp& nlp, const VectorXd& z, const VectorXd& y) {
  return nlp.objective_gradient(z) + nlp.jacobian(z).transpose() * y;
}

VectorXd kkt_vector(const EqualityNlp& nlp, const VectorXd& z, const VectorXd& y) {
  VectorXd r(nlp.num_variables() + nlp.num_constraints());
  r << lagrangian_gradient(nlp, z, y), nlp.constraints(z);
  return r;
}

MatrixXd fd_hessian(const EqualityNlp& nlp, const VectorXd& z, const VectorXd& y,
                    const VectorXd& grad) {
  const Index n = z.size();
  MatrixXd h(n, n);
  VectorXd zp = z;
  for (Index j = 0; j < n; ++j) {
    const double step = kHessianStep * std::max(1.0, std::fabs(z(j)));
    zp(j) = z(j) + step;
    h.col(j) = (lagrangian_gradient(nlp, zp, y) - grad) / (zp(j) - z(j));
    zp(j) = z(j);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace

void SolverOptions::validate() const {
  if (!(kkt_tolerance > 0.0 && kkt_tolerance < 1e-4))
    throw std::invalid_argument("SolverOptions: kkt_tolerance must lie in (0, 1e-4)");
  if (max_iterations <= 0) throw std::invalid_argument("SolverOptions: max_iterations must be positive");
  if (!(regularization_initial > 0.0))
    throw std::invalid_argument("SolverOptions: regularization_initial must be positive");
  if (!(line_search_shrink > 0.0 && line_search_shrink < 1.0))
    throw std::invalid_argument("SolverOptions: line_search_shrink must lie in (0, 1)");
  if (!(min_step > 0.0)) throw std::invalid_argument("SolverOptions: min_step must be positive");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max-iterations";
    case SolveStatus::SingularKkt:
      return "singular-kkt";
  }
  return "unknown";
}

double kkt_norm(const EqualityNlp& nlp, const VectorXd& z, const VectorXd& y) {
  return kkt_vector(nlp, z, y).lpNorm<Eigen::Infinity>();
}

SolveOutput solve(const EqualityNlp& nlp, const SolverOptions& opts) {
  opts.validate();
  const Index n = nlp.num_variables(), m = nlp.num_constraints();

  SolveOutput out;
  out.z = nlp.initial_point();
  if (out.z.size() != n) throw std::invalid_argument("solve: initial point has wrong size");

  // Least-squares multiplier estimate: minimize ||grad f + J^T y||.
  if (m > 0) {
    const MatrixXd jt = nlp.jacobian(out.z).transpose();
    out.multipliers = -jt.completeOrthogonalDecomposition().solve(nlp.objective_gradient(out.z));
  } else {
    out.multipliers = VectorXd::Zero(0);
  }

  SolveReport& report = out.report;
  double floor_reg = 0.0;  // raised after a failed line search
  for (int iter = 0;; ++iter) {
    const VectorXd r = kkt_vector(nlp, out.z, out.multipliers);
    const double norm_inf = r.lpNorm<Eigen::Infinity>();
    const double merit = r.norm();
    report.final_kkt_norm = norm_inf;
    report.iterations = iter;
    if (norm_inf <= opts.kkt_tolerance) {
      report.status = SolveStatus::Converged;
      return out;
    }
    if (iter >= opts.max_iterations) {
      report.status = SolveStatus::MaxIterations;
      return out;
    }

    const VectorXd grad = r.head(n);
    const MatrixXd hess = fd_hessian(nlp, out.z, out.multipliers, grad);
    const MatrixXd jac = nlp.jacobian(out.z);

    MatrixXd kkt = MatrixXd::Zero(n + m, n + m);
    kkt.topLeftCorner(n, n) = hess;
    kkt.bottomLeftCorner(m, n) = jac;
    kkt.topRightCorner(n, m) = jac.transpose();

    const ReducedHessian reduced(hess, jac);
    double dw = floor_reg, dc = reduced.full_rank() ? 0.0 : opts.regularization_initial;
    while (!reduced.positive_definite(dw, dc)) {
      dw = dw == 0.0 ? opts.regularization_initial : kRegularizationGrowth * dw;
      if (dw > kMaxRegularization) {
        report.status = SolveStatus::SingularKkt;
        return out;
      }
    }
    kkt.topLeftCorner(n, n).diagonal().array() += dw;
    if (m > 0) kkt.bottomRightCorner(m, m).diagonal().array() -= dc;
    const Eigen::PartialPivLU<MatrixXd> lu(kkt);
    const VectorXd step = lu.solve(-r);
    if (!step.allFinite()) {
      report.status = SolveStatus::SingularKkt;
      return out;
    }

    const VectorXd dz = step.head(n), dy = step.tail(m);
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= opts.min_step) {
      const VectorXd z_try = out.z + alpha * dz;
      const VectorXd y_try = out.multipliers + alpha * dy;
      const VectorXd r_try = kkt_vector(nlp, z_try, y_try);
      if (r_try.allFinite() && r_try.norm() <= (1.0 - kArmijo * alpha) * merit) {
        out.z = z_try;
        out.multipliers = y_try;
        accepted = true;
        break;
      }
      alpha *= opts.line_search_shrink;
    }
    report.step_history.push_back({iter, norm_inf, merit, accepted ? alpha : 0.0, dw});
    floor_reg = accepted ? 0.0 : std::max(opts.regularization_initial, 10.0 * dw);
    if (floor_reg > kMaxRegularization) {
      report.status = SolveStatus::SingularKkt;
      return out;
    }
  }
}

}  // namespace lobatto
