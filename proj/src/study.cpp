#include "lobatto/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <sstream>
#include <thread>

namespace lobatto {

Run run_problem(const OcpDefinition& ocp, int n, Method method, const SolverOptions& opts) {
  Transcript t(ocp, lobatto_nodes(n), method);
  SolveOutput out = solve(t, opts);
  Solution sol = make_solution(t, out.z, out.multipliers);
  return Run{std::move(t), std::move(out), std::move(sol)};
}

ErrorMetrics error_metrics(const Run& run, const AnalyticTruth& truth) {
  const Transcript& t = run.transcript;
  const Solution& s = run.solution;
  ErrorMetrics e{0.0, 0.0, 0.0};
  for (int k = 0; k < t.num_collocation(); ++k) {
    const double tk = t.state_time(k);
    e.e_x = std::max(e.e_x, (s.states.row(k).transpose() - truth.state(tk)).lpNorm<Eigen::Infinity>());
    e.e_u = std::max(e.e_u, (s.controls.row(k).transpose() - truth.control(tk)).lpNorm<Eigen::Infinity>());
    e.e_lambda =
        std::max(e.e_lambda, (s.costates.row(k).transpose() - truth.costate(tk)).lpNorm<Eigen::Infinity>());
  }
  return e;
}

std::vector<ConvergenceRecord> convergence_sweep(const OcpDefinition& ocp, const AnalyticTruth& truth,
                                                 int n_min, int n_max,
                                                 const std::vector<Method>& methods,
                                                 const SolverOptions& opts, unsigned jobs) {
  if (n_min < 3 || n_max < n_min) throw std::invalid_argument("convergence_sweep: need 3 <= n_min <= n_max");
  if (methods.empty()) throw std::invalid_argument("convergence_sweep: no methods");
  opts.validate();

  struct Task {
    int n;
    Method method;
  };
  std::vector<Task> tasks;
  for (int n = n_min; n <= n_max; ++n)
    for (Method m : methods) tasks.push_back({n, m});

  auto work = [&](const Task& task) {
    ConvergenceRecord rec{task.n, task.method, false, 0, {}, {}, {}};
    const Run run = run_problem(ocp, task.n, task.method, opts);
    rec.converged = run.converged();
    rec.iterations = run.output.report.iterations;
    if (rec.converged) {
      const ErrorMetrics e = error_metrics(run, truth);
      rec.e_x = e.e_x;
      rec.e_u = e.e_u;
      rec.e_lambda = e.e_lambda;
    }
    return rec;
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<ConvergenceRecord> records(tasks.size());
  // Tasks are handed out in fixed-size waves; results land in their slot.
  for (std::size_t begin = 0; begin < tasks.size(); begin += jobs) {
    const std::size_t end = std::min(tasks.size(), begin + jobs);
    std::vector<std::future<ConvergenceRecord>> wave;
    for (std::size_t i = begin; i < end; ++i)
      wave.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, work,
                                std::cref(tasks[i])));
    for (std::size_t i = begin; i < end; ++i) records[i] = wave[i - begin].get();
  }
  return records;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string nodes_csv(const NodeSet& ns) {
  struct Row {
    double tau;
    std::optional<double> weight;
  };
  std::vector<Row> rows;
  for (int k = 0; k < ns.n(); ++k) rows.push_back({ns.collocation()[k], ns.weights()[k]});
  rows.push_back({ns.exceptional(), std::nullopt});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.tau < b.tau; });

  std::ostringstream os;
  os << "tau,weight,is_exceptional\n";
  for (const Row& r : rows)
    os << format_number(r.tau) << ',' << optional_number(r.weight) << ',' << bool_text(!r.weight) << '\n';
  return os.str();
}

std::string diffmat_csv(const DiffMatrix& d) {
  std::ostringstream os;
  os << "row,col,row_tau,col_tau,value\n";
  for (Eigen::Index k = 0; k < d.rows(); ++k)
    for (Eigen::Index i = 0; i < d.cols(); ++i)
      os << k << ',' << i << ',' << format_number(d.row_nodes[k]) << ',' << format_number(d.col_nodes[i])
         << ',' << format_number(d.entries(k, i)) << '\n';
  return os.str();
}

std::string solution_csv(const Transcript& t, const Solution& sol) {
  const int nx = t.ocp().n_x, nu = t.ocp().n_u, n = t.num_collocation();
  std::ostringstream os;
  os << 't';
  for (int j = 1; j <= nx; ++j) os << ",x_" << j;
  for (int j = 1; j <= nu; ++j) os << ",u_" << j;
  for (int j = 1; j <= nx; ++j) os << ",lambda_" << j;
  os << '\n';

  std::vector<int> order(sol.times.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sol.times[a] < sol.times[b]; });
  for (int i : order) {
    os << format_number(sol.times[i]);
    for (int j = 0; j < nx; ++j) os << ',' << format_number(sol.states(i, j));
    const bool collocated = i < n;
    for (int j = 0; j < nu; ++j) os << ',' << (collocated ? format_number(sol.controls(i, j)) : "");
    for (int j = 0; j < nx; ++j) os << ',' << (collocated ? format_number(sol.costates(i, j)) : "");
    os << '\n';
  }
  return os.str();
}

std::string convergence_csv(const std::vector<ConvergenceRecord>& records) {
  std::ostringstream os;
  os << "n,method,E_x,E_u,E_lambda,converged,iterations\n";
  for (const ConvergenceRecord& r : records)
    os << r.n << ',' << to_string(r.method) << ',' << optional_number(r.e_x) << ','
       << optional_number(r.e_u) << ',' << optional_number(r.e_lambda) << ',' << bool_text(r.converged)
       << ',' << r.iterations << '\n';
  return os.str();
}

}  // namespace lobatto
