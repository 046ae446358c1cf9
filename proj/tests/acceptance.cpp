// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lobatto/discretization.hpp"
#include "lobatto/orthopoly.hpp"
#include "lobatto/study.hpp"

using namespace lobatto;
using Eigen::MatrixXd;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// Independent of the library's verify_definition: monomial Vandermonde on
// the column nodes against exact derivatives on the row nodes.
double monomial_defect(const DiffMatrix& d, int degree_lo, int degree_hi) {
  double worst = 0.0;
  for (int p = degree_lo; p <= degree_hi; ++p) {
    Eigen::VectorXd v(d.cols());
    for (Eigen::Index i = 0; i < d.cols(); ++i) v(i) = std::pow(d.col_nodes[i], p);
    const Eigen::VectorXd dv = d.entries * v;
    for (Eigen::Index k = 0; k < d.rows(); ++k) {
      const double exact = p == 0 ? 0.0 : p * std::pow(d.row_nodes[k], p - 1);
      worst = std::max(worst, std::fabs(dv(k) - exact));
    }
  }
  return worst;
}

Outcome nodes_and_weights() {
  double node_err = 0.0;
  const double a = 1.0 / std::sqrt(5.0), b = std::sqrt(3.0 / 7.0);
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> closed{
      {{-1.0, -a, a, 1.0}, {1.0 / 6, 5.0 / 6, 5.0 / 6, 1.0 / 6}},
      {{-1.0, -b, 0.0, b, 1.0}, {0.1, 49.0 / 90, 32.0 / 45, 49.0 / 90, 0.1}}};
  for (int n : {4, 5}) {
    const NodeSet ns = lobatto_nodes(n);
    const auto& [x, w] = closed[n - 4];
    for (int k = 0; k < n; ++k) {
      node_err = std::max(node_err, std::fabs(ns.collocation()[k] - x[k]));
      node_err = std::max(node_err, std::fabs(ns.weights()[k] - w[k]));
    }
  }
  node_err = std::max(node_err, std::fabs(lobatto_nodes(4).exceptional()));
  node_err = std::max(node_err,
                      std::fabs(lobatto_nodes(5).exceptional() - std::sqrt((15.0 - 2.0 * std::sqrt(30.0)) / 35.0)));

  double quad_err = 0.0;
  for (int n = 3; n <= 50; ++n) {
    const NodeSet ns = lobatto_nodes(n);
    for (int d = 0; d <= 2 * n - 3; ++d) {
      double q = 0.0;
      for (int k = 0; k < n; ++k) q += ns.weights()[k] * std::pow(ns.collocation()[k], d);
      quad_err = std::max(quad_err, std::fabs(q - (d % 2 ? 0.0 : 2.0 / (d + 1))));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "closed-form err %.2e (<= 1e-13), quadrature err %.2e (<= 1e-11)", node_err,
                quad_err);
  return {node_err <= 1e-13 && quad_err <= 1e-11, buf};
}

Outcome differentiation_matrix() {
  double def = 0.0, null = 0.0;
  bool rank_ok = true, std_rank_ok = true;
  for (int n = 3; n <= 30; ++n) {
    const NodeSet ns = lobatto_nodes(n);
    const DiffMatrix d = build_new_lobatto_D(ns);
    def = std::max(def, monomial_defect(d, 0, n));
    null = std::max(null, d.entries.rowwise().sum().cwiseAbs().maxCoeff());
    Eigen::JacobiSVD<MatrixXd> svd(d.entries);
    const auto s = svd.singularValues();
    rank_ok &= (s.array() > 1e-10 * s(0)).count() == n;
    Eigen::JacobiSVD<MatrixXd> ssvd(build_standard_lobatto_D(ns).entries);
    const auto ss = ssvd.singularValues();
    std_rank_ok &= (ss.array() > 1e-10 * ss(0)).count() <= n - 1;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "definition %.2e (<= 1e-9), D*1 %.2e (<= 1e-11), rank N %s, standard rank <= N-1 %s",
                def, null, rank_ok ? "yes" : "no", std_rank_ok ? "yes" : "no");
  return {def <= 1e-9 && null <= 1e-11 && rank_ok && std_rank_ok, buf};
}

Outcome runge() {
  double worst = 0.0;
  for (int n = 3; n <= 50; ++n) {
    const NodeSet ns = lobatto_nodes(n);
    const std::vector<double> grid = uniform_grid(-1.0, 1.0, 10001);
    const auto l = exceptional_lagrange(ns, grid);
    for (double v : l) worst = std::max(worst, std::fabs(v));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |l_xi| %.15f (<= 1 + 1e-10)", worst);
  return {worst <= 1.0 + 1e-10, buf};
}

Outcome dual_matrix() {
  double exact = 0.0, margin = INFINITY;
  for (int n = 3; n <= 30; ++n) {
    const NodeSet ns = lobatto_nodes(n);
    const DiffMatrix dual = build_dual_D(ns, build_new_lobatto_D(ns));
    exact = std::max(exact, monomial_defect(dual, 0, n - 2));
    margin = std::min(margin, monomial_defect(dual, n - 1, n - 1));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "degree <= N-2 err %.2e (<= 1e-9), degree N-1 margin %.2e (>= 1e-6)", exact, margin);
  return {exact <= 1e-9 && margin >= 1e-6, buf};
}

// Collected by criteria 5 to 7 and checked by criterion 8.
std::vector<std::pair<std::string, KktReport>> kkt_log;

void log_kkt(const Run& run, const std::string& label) {
  if (!run.converged()) return;
  const Transcript& t = run.transcript;
  kkt_log.emplace_back(label, kkt_residuals(t, run.solution, t.nodes(), t.diff_matrix(), adjoint_matrix(t)));
}

Outcome ivp_convergence() {
  const auto [ocp, truth] = nonlinear_ivp();
  std::vector<double> ns, logs;
  ErrorMetrics at25{};
  bool all_new = true;
  for (int n = 6; n <= 25; ++n) {
    const Run run = run_problem(ocp, n, Method::NewLobatto);
    log_kkt(run, "nonlinear-ivp new N=" + std::to_string(n));
    if (!run.converged()) {
      all_new = false;
      continue;
    }
    const ErrorMetrics e = error_metrics(run, truth);
    ns.push_back(n);
    logs.push_back(std::log(e.e_x));
    if (n == 25) at25 = e;
  }
  // Least-squares slope of ln E_x against N.
  const double mn = std::accumulate(ns.begin(), ns.end(), 0.0) / ns.size();
  const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / logs.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (ns[i] - mn) * (logs[i] - ml);
    sxx += (ns[i] - mn) * (ns[i] - mn);
  }
  const double slope = sxy / sxx;

  double min_std = INFINITY;
  int std_converged = 0;
  for (int n = 6; n <= 30; ++n) {
    const Run run = run_problem(ocp, n, Method::StandardLobatto);
    log_kkt(run, "nonlinear-ivp standard N=" + std::to_string(n));
    if (!run.converged()) continue;
    ++std_converged;
    min_std = std::min(min_std, error_metrics(run, truth).e_lambda);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "N=25 E_x %.2e E_u %.2e E_lambda %.2e; ln-slope %.3f (<= -0.5, %zu/20 converged); "
                "standard min E_lambda %.2e (>= 1e-3, %d/25 converged)",
                at25.e_x, at25.e_u, at25.e_lambda, slope, ns.size(), min_std, std_converged);
  const bool pass = all_new && at25.e_x <= 1e-7 && at25.e_u <= 1e-6 && at25.e_lambda <= 1e-5 && slope <= -0.5 &&
                    std_converged > 0 && min_std >= 1e-3;
  return {pass, buf};
}

Outcome endpoint_costates() {
  const auto [ocp, truth] = nonlinear_ivp();
  const Run run = run_problem(ocp, 25, Method::NewLobatto);
  if (!run.converged()) return {false, "N=25 solve did not converge"};
  // Rows 0 and N-1 are the collocated endpoints t = 0 and t = 2.
  const double l0 = run.solution.costates(0, 0), lf = run.solution.costates(24, 0);
  const double e0 = std::fabs(l0 - truth.costate(0.0)(0)), ef = std::fabs(lf + 1.0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "lambda(0) %.10f err %.2e, lambda(2) %.10f err %.2e (<= 1e-5)", l0, e0, lf, ef);
  return {e0 <= 1e-5 && ef <= 1e-5, buf};
}

Outcome orbit_raising_check() {
  const OcpDefinition ocp = orbit_raising();
  const Run run = run_problem(ocp, 25, Method::NewLobatto);
  log_kkt(run, "orbit-raising new N=25");
  const Run ref = run_problem(ocp, 45, Method::NewLobatto);
  log_kkt(ref, "orbit-raising new N=45");
  if (!run.converged() || !ref.converged()) return {false, "orbit-raising solve did not converge"};

  const Transcript& t = run.transcript;
  const KktReport kkt = kkt_residuals(t, run.solution, t.nodes(), t.diff_matrix(), adjoint_matrix(t));
  const double r25 = run.solution.states(24, 0), r45 = ref.solution.states(44, 0);

  const MatrixXd lam = run.solution.costates;
  const MatrixXd coeff = legendre_coefficients(t.nodes(), lam);
  double worst_ratio = 0.0;
  for (Eigen::Index c = 0; c < lam.cols(); ++c) {
    const double scale = lam.col(c).cwiseAbs().maxCoeff();
    const double top = std::fabs(coeff(coeff.rows() - 1, c));
    if (scale > 0.0) worst_ratio = std::max(worst_ratio, top / scale);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "boundary %.2e (<= 1e-8); r(tf) N=25 %.12f vs N=45 %.12f diff %.2e (<= 1e-6); "
                "top Legendre coeff / max|lambda| %.2e (<= 1e-6)",
                kkt.boundary, r25, r45, std::fabs(r25 - r45), worst_ratio);
  return {kkt.boundary <= 1e-8 && std::fabs(r25 - r45) <= 1e-6 && worst_ratio <= 1e-6, buf};
}

Outcome kkt_verification() {
  double worst = 0.0;
  std::string where;
  for (const auto& [label, k] : kkt_log) {
    const double m = std::max({k.state_equation, k.adjoint, k.exceptional, k.control});
    if (m > worst) {
      worst = m;
      where = label;
    }
  }
  char buf[192];
  std::snprintf(buf, sizeof buf, "%zu converged solves, worst residual %.2e at %s (<= 1e-7)", kkt_log.size(), worst,
                where.c_str());
  return {!kkt_log.empty() && worst <= 1e-7, buf};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "node/weight exactness", 1.0, nodes_and_weights},
      {2, "differentiation matrix definition", 5.0, differentiation_matrix},
      {3, "Runge bound", 5.0, runge},
      {4, "dual matrix", 5.0, dual_matrix},
      {5, "analytic benchmark convergence", 120.0, ivp_convergence},
      {6, "endpoint costates", 120.0, endpoint_costates},
      {7, "orbit raising", 30.0, orbit_raising_check},
      {8, "discrete KKT verification", 1e9, kkt_verification},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
