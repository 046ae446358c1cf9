#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lobatto/discretization.hpp"
#include "lobatto/nlpsolve.hpp"
#include "lobatto/ocp.hpp"
#include "lobatto/transcribe.hpp"

namespace lobatto {

/// One transcribed and solved problem instance.
struct Run {
  Transcript transcript;
  SolveOutput output;
  Solution solution;

  bool converged() const { return output.report.converged(); }
};

Run run_problem(const OcpDefinition& ocp, int n, Method method, const SolverOptions& opts = {});

/// Max-abs errors at the collocation nodes against the exact solution.
struct ErrorMetrics {
  double e_x;
  double e_u;
  double e_lambda;
};

ErrorMetrics error_metrics(const Run& run, const AnalyticTruth& truth);

struct ConvergenceRecord {
  int n;
  Method method;
  bool converged;
  int iterations;
  // Empty when the solve did not converge.
  std::optional<double> e_x;
  std::optional<double> e_u;
  std::optional<double> e_lambda;
};

/// Solves every (n, method) pair with n_min <= n <= n_max. Individual
/// failures are recorded, not thrown. Rows are ordered by n, then by the
/// order of `methods`, regardless of `jobs` (0 picks the hardware
/// concurrency).
std::vector<ConvergenceRecord> convergence_sweep(const OcpDefinition& ocp, const AnalyticTruth& truth,
                                                 int n_min, int n_max,
                                                 const std::vector<Method>& methods,
                                                 const SolverOptions& opts = {}, unsigned jobs = 0);

// CSV writers. Numbers use 17 significant digits; missing values are empty
// fields; lines end with '\n'.
std::string format_number(double v);
std::string nodes_csv(const NodeSet& ns);
std::string diffmat_csv(const DiffMatrix& d);
std::string solution_csv(const Transcript& t, const Solution& sol);
std::string convergence_csv(const std::vector<ConvergenceRecord>& records);

}  // namespace lobatto
