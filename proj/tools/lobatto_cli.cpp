// Command-line front end: node tables, differentiation matrices, benchmark
// solves and convergence sweeps, all emitted as CSV.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lobatto/discretization.hpp"
#include "lobatto/kernels.hpp"
#include "lobatto/nlpsolve.hpp"
#include "lobatto/ocp.hpp"
#include "lobatto/orthopoly.hpp"
#include "lobatto/study.hpp"
#include "lobatto/transcribe.hpp"

namespace {

using namespace lobatto;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(method_from_string(item));
  if (out.empty()) throw std::invalid_argument("--methods: empty list");
  return out;
}

int cmd_diffmat_check(const NodeSet& ns, const DiffMatrix& d) {
  const int n = ns.n();
  const int order = d.kind == MatrixKind::NewLobatto ? n : d.kind == MatrixKind::StandardLobatto ? n - 1 : n - 2;
  const int rank = numerical_rank(d.entries);
  const int expected_rank = d.kind == MatrixKind::NewLobatto ? n : n - 1;
  const double null_residual = (d.entries * Eigen::VectorXd::Ones(d.cols())).lpNorm<Eigen::Infinity>();
  const double def_residual = verify_definition(d, order);
  const double null_limit = 1e-11 * static_cast<double>(d.cols());

  struct Line {
    std::string name;
    double value;
    std::string limit;
    bool pass;
  };
  const std::vector<Line> lines{
      {"rows", static_cast<double>(d.rows()), "", true},
      {"cols", static_cast<double>(d.cols()), "", true},
      {"order", static_cast<double>(order), "", true},
      {"definition_residual", def_residual, "1e-9", def_residual <= 1e-9},
      {"constant_nullspace_residual", null_residual, format_number(null_limit), null_residual <= null_limit},
      {"numerical_rank", static_cast<double>(rank), std::to_string(expected_rank), rank == expected_rank},
      {"condition_number", condition_number(d.entries), "", true},
  };
  bool ok = true;
  std::cout << "check,value,limit,pass\n";
  for (const Line& l : lines) {
    std::cout << l.name << ',' << format_number(l.value) << ',' << l.limit << ','
              << (l.pass ? "true" : "false") << '\n';
    ok = ok && l.pass;
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lobatto pseudospectral toolkit with an exceptional sample"};
  app.require_subcommand(1);

  int n = 0;
  auto* nodes_cmd = app.add_subcommand("nodes", "Lobatto nodes, weights and exceptional sample");
  nodes_cmd->add_option("--n", n, "number of collocation nodes (>= 3)")->required()->check(CLI::Range(3, 1000));

  std::string kind = "new";
  bool check = false;
  auto* diff_cmd = app.add_subcommand("diffmat", "dump a differentiation matrix");
  diff_cmd->add_option("--n", n, "number of collocation nodes (>= 3)")->required()->check(CLI::Range(3, 1000));
  diff_cmd->add_option("--kind", kind, "new, standard or dual")
      ->check(CLI::IsMember({"new", "standard", "dual"}));
  diff_cmd->add_flag("--check", check, "print property checks instead of entries");

  std::string problem, method = "new-lobatto", out_path, methods = "new-lobatto";
  SolverOptions opts;
  auto* solve_cmd = app.add_subcommand("solve", "solve a benchmark problem");
  solve_cmd->add_option("--problem", problem, "orbit-raising or nonlinear-ivp")->required();
  solve_cmd->add_option("--n", n, "number of collocation nodes (>= 3)")->required()->check(CLI::Range(3, 1000));
  solve_cmd->add_option("--method", method, "new-lobatto or standard-lobatto");
  solve_cmd->add_option("--tol", opts.kkt_tolerance, "KKT tolerance");
  solve_cmd->add_option("--max-iter", opts.max_iterations, "iteration limit");
  solve_cmd->add_option("--out", out_path, "output CSV path")->required();

  int n_min = 0, n_max = 0;
  unsigned jobs = 0;
  auto* conv_cmd = app.add_subcommand("converge", "error sweep against the analytic solution");
  conv_cmd->add_option("--problem", problem, "problem with a known solution (nonlinear-ivp)")->required();
  conv_cmd->add_option("--n-min", n_min, "smallest N")->required()->check(CLI::Range(3, 1000));
  conv_cmd->add_option("--n-max", n_max, "largest N")->required()->check(CLI::Range(3, 1000));
  conv_cmd->add_option("--methods", methods, "comma separated methods");
  conv_cmd->add_option("--tol", opts.kkt_tolerance, "KKT tolerance");
  conv_cmd->add_option("--max-iter", opts.max_iterations, "iteration limit");
  conv_cmd->add_option("--jobs", jobs, "parallel solves (0 = hardware concurrency)");
  conv_cmd->add_option("--out", out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*nodes_cmd) {
      std::cout << nodes_csv(lobatto_nodes(n));
      return 0;
    }

    if (*diff_cmd) {
      const NodeSet ns = lobatto_nodes(n);
      const DiffMatrix d_new = build_new_lobatto_D(ns);
      const DiffMatrix d = kind == "new"        ? d_new
                           : kind == "standard" ? build_standard_lobatto_D(ns)
                                                : build_dual_D(ns, d_new);
      if (check) return cmd_diffmat_check(ns, d);
      std::cout << diffmat_csv(d);
      return 0;
    }

    if (*solve_cmd) {
      const Method m = method_from_string(method);
      const auto [ocp, truth] = problem_by_name(problem);
      opts.validate();
      const Run run = run_problem(ocp, n, m, opts);
      const SolveReport& rep = run.output.report;
      std::cerr << "status=" << to_string(rep.status) << " iterations=" << rep.iterations
                << " kkt_norm=" << format_number(rep.final_kkt_norm)
                << " objective=" << format_number(run.solution.objective_value) << '\n';
      if (!run.converged()) return kExitFailure;
      const KktReport kkt = kkt_residuals(run.transcript, run.solution, run.transcript.nodes(),
                                          run.transcript.diff_matrix(), adjoint_matrix(run.transcript));
      std::cerr << "kkt state=" << format_number(kkt.state_equation) << " adjoint=" << format_number(kkt.adjoint)
                << " exceptional=" << format_number(kkt.exceptional) << " control=" << format_number(kkt.control)
                << " boundary=" << format_number(kkt.boundary) << '\n';
      write_file(out_path, solution_csv(run.transcript, run.solution));
      return 0;
    }

    if (*conv_cmd) {
      const auto [ocp, truth] = problem_by_name(problem);
      if (!truth) throw std::invalid_argument("problem '" + problem + "' has no analytic solution");
      if (n_max < n_min) throw std::invalid_argument("--n-max must be >= --n-min");
      const auto records = convergence_sweep(ocp, *truth, n_min, n_max, parse_methods(methods), opts, jobs);
      write_file(out_path, convergence_csv(records));
      int failed = 0;
      for (const auto& r : records) failed += r.converged ? 0 : 1;
      std::cerr << records.size() << " runs, " << failed << " not converged\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
