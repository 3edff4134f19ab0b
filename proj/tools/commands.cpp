#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "results_io.hpp"
#include "ridge/closed_form.hpp"
#include "ridge/kernels.hpp"
#include "ridge/oracle.hpp"
#include "ridge/weighted.hpp"

namespace ridge::cli {
namespace {

// Maps library and I/O exceptions to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ResultsError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const EvalError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

ProblemConfig load_with_q(const std::string& path, std::optional<std::size_t> q) {
  ProblemConfig cfg = load_config(path);
  if (q) {
    if (*q == 0) throw ConfigError("-q must be positive");
    cfg.q = *q;
  }
  return cfg;
}

struct Run {
  ApproxSolution solution;
  Defect characterization;
};

Run run_solver(const Instance& inst, const ProblemConfig& cfg, bool force_fixed_point) {
  if (inst.unit_weights && !force_fixed_point) {
    ApproxSolution sol = solve_unweighted(inst.problem.f_star(), inst.basis);
    const Defect d = check_marginal_characterization(sol.components, inst.problem.f_star());
    return {std::move(sol), d};
  }
  ApproxSolution sol = solve_fixed_point(inst.problem, cfg.solver);
  const Defect d = verify_extremality(inst.problem, sol.components);
  return {std::move(sol), d};
}

std::string describe_defect(const Defect& d, const RSetDomain& dom) {
  return format_real(d.value) + " at component " + std::to_string(d.axis + 1) + ", node " +
         std::to_string(d.node) + " (y" + std::to_string(d.axis + 1) + " = " +
         format_real(dom.nodes(d.axis)[d.node]) + ")";
}

void print_echo(std::ostream& out, const std::string& echo) {
  out << "# parsed config\n" << echo << "# end config\n";
}

void print_convergence(std::ostream& out, const ApproxSolution& sol) {
  if (sol.method == Method::ClosedForm) {
    out << "convergence: closed form, no iteration\n";
  } else if (sol.convergence.converged) {
    out << "convergence: converged after " << sol.convergence.sweeps << " sweeps (last change "
        << format_real(sol.convergence.last_change) << ")\n";
  } else {
    out << "convergence: WARNING not converged after " << sol.convergence.sweeps
        << " sweeps (last change " << format_real(sol.convergence.last_change) << ")\n";
  }
}

}  // namespace

void apply_thread_env() {
  const char* env = std::getenv("RIDGEAPPROX_THREADS");
  if (env == nullptr || *env == '\0') {
    kernels::set_max_threads(0);
    return;
  }
  const std::string_view s(env);
  int threads = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), threads);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || threads < 0) {
    throw ConfigError("RIDGEAPPROX_THREADS must be a nonnegative integer, got '" +
                      std::string(s) + "'");
  }
  kernels::set_max_threads(threads);
}

int cmd_solve(const std::string& config_path, const SolveOptions& opts, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const ProblemConfig cfg = load_with_q(config_path, opts.q);
    const std::string echo = to_text(cfg);
    const Instance inst = build_instance(cfg);
    const Run run = run_solver(inst, cfg, opts.force_fixed_point);
    const ApproxSolution& sol = run.solution;
    const RSetDomain& dom = inst.domain;

    Summary s;
    s.method = to_string(sol.method);
    s.n = cfg.n;
    s.r = cfg.r;
    s.q = cfg.q;
    s.det_j = inst.basis.det();
    s.a = integrate_full(inst.problem.f_star());
    s.error = sol.error;
    s.residual_error = sol.residual_error;
    s.orthogonality_defect = sol.orthogonality_defect;
    s.characterization = run.characterization;
    s.convergence = sol.convergence;
    s.intervals = cfg.intervals;

    std::vector<ComponentTable> tables;
    for (const auto& c : sol.components) tables.push_back(component_table(dom, c));
    write_results(opts.outdir, s, tables, echo);
    if (opts.dense) write_dense(opts.outdir, *opts.dense);

    print_echo(out, echo);
    out << "method: " << s.method << "\n";
    out << "det J = " << format_real(s.det_j) << "\n";
    out << "A = " << format_real(s.a) << "\n";
    out << "E(f) = " << format_real(s.error) << "\n";
    out << "residual E = " << format_real(s.residual_error) << "\n";
    out << "orthogonality defect = " << format_real(s.orthogonality_defect) << "\n";
    out << "characterization defect = " << describe_defect(s.characterization, dom) << "\n";
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto& v = tables[i].values;
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      out << "g" << i + 1 << ": " << v.size() << " nodes, min " << format_real(*lo) << ", max "
          << format_real(*hi) << ", ridge norm "
          << format_real(std::sqrt(ridge_norm_sq(sol.components[i], dom))) << "\n";
    }
    print_convergence(out, sol);
    out << "results written to " << opts.outdir.string() << "\n";
    if (!sol.convergence.converged) {
      err << "warning: fixed-point iteration did not converge; results are flagged\n";
      return static_cast<int>(kNotConverged);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const std::string& config_path, const std::filesystem::path& results,
               double threshold, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Summary summary = read_summary(results);
    // The results carry the q they were solved with, which may override the file.
    const ProblemConfig cfg = load_with_q(config_path, summary.q);
    if (summary.n != cfg.n || summary.r != cfg.r) {
      throw ResultsError("results were produced for a different problem shape");
    }
    const Instance inst = build_instance(cfg);
    const std::vector<RidgeComponent> comps = read_components(results, inst.domain);

    Defect worst = verify_extremality(inst.problem, comps);
    out << "extremality defect = " << describe_defect(worst, inst.domain) << "\n";
    if (inst.unit_weights) {
      const Defect d = check_marginal_characterization(comps, inst.problem.f_star());
      out << "marginal characterization defect = " << describe_defect(d, inst.domain) << "\n";
      if (d.value > worst.value) worst = d;
    }
    if (worst.value < threshold) {
      out << "verify: PASS (threshold " << format_real(threshold) << ")\n";
      return static_cast<int>(kOk);
    }
    out << "verify: FAIL worst defect " << describe_defect(worst, inst.domain) << " (threshold "
        << format_real(threshold) << ")\n";
    return static_cast<int>(kVerifyFailed);
  });
}

int cmd_oracle(const std::string& config_path, bool force_fixed_point, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const ProblemConfig cfg = load_config(config_path);
    const double nodes = std::pow(static_cast<double>(cfg.q), static_cast<double>(cfg.n));
    if (nodes > kOracleMaxNodes) {
      err << "error: oracle instance too large: q^n = " << format_real(nodes) << " exceeds "
          << format_real(kOracleMaxNodes) << "\n";
      return static_cast<int>(kTooLarge);
    }
    const Instance inst = build_instance(cfg);
    const Run run = run_solver(inst, cfg, force_fixed_point);
    const OracleResult oracle = solve_ls(build_ls_model(inst.problem));
    const CompareReport rep = compare(inst.problem, run.solution, oracle);

    print_echo(out, to_text(cfg));
    out << "solver: " << to_string(run.solution.method) << "\n";
    out << "solver E(f) = " << format_real(rep.solver_error) << "\n";
    out << "oracle E(f) = " << format_real(rep.oracle_error) << "\n";
    out << "oracle rank = " << oracle.rank << " of " << cfg.r * cfg.q << " columns\n";
    out << "error gap = " << format_real(rep.error_gap) << "\n";
    out << "approximant gap = " << format_real(rep.approximant_gap) << "\n";
    print_convergence(out, run.solution);
    if (!run.solution.convergence.converged) return static_cast<int>(kNotConverged);
    return static_cast<int>(kOk);
  });
}

int cmd_export(const std::filesystem::path& results, std::size_t points, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    write_dense(results, points);
    out << "dense components (" << points << " points) written to " << results.string() << "\n";
    return static_cast<int>(kOk);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best L2 approximation by weighted ridge functions"};
  app.name("ridgeapprox");
  app.require_subcommand(1);

  std::string config;
  std::string results;
  SolveOptions solve_opts;
  std::size_t q = 0;
  std::size_t dense = 0;
  double threshold = 1e-8;
  std::size_t points = 0;
  bool force_fixed_point = false;

  auto* solve = app.add_subcommand("solve", "Solve the problem described by a config file");
  solve->add_option("config", config, "Config file")->required();
  solve->add_option("-o,--outdir", solve_opts.outdir, "Results directory");
  auto* q_opt = solve->add_option("-q", q, "Gauss nodes per axis, overriding the config");
  auto* dense_opt = solve->add_option("--dense", dense, "Also write equispaced resampling");
  solve->add_flag("--force-fixed-point", solve_opts.force_fixed_point,
                  "Use the fixed-point solver even when all weights are 1");

  auto* verify = app.add_subcommand("verify", "Check saved results against a config");
  verify->add_option("config", config, "Config file")->required();
  verify->add_option("outdir", results, "Results directory")->required();
  verify->add_option("--threshold", threshold, "Pass when every defect is below this");

  auto* oracle = app.add_subcommand("oracle", "Compare the solver with brute-force least squares");
  oracle->add_option("config", config, "Config file")->required();
  oracle->add_flag("--force-fixed-point", force_fixed_point,
                   "Use the fixed-point solver even when all weights are 1");

  auto* exp = app.add_subcommand("export", "Resample saved components on an equispaced grid");
  exp->add_option("outdir", results, "Results directory")->required();
  exp->add_option("--dense", points, "Number of points")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? static_cast<int>(kOk) : static_cast<int>(kConfigError);
  }

  const int env = guarded(err, [] {
    apply_thread_env();
    return static_cast<int>(kOk);
  });
  if (env != kOk) return env;

  if (solve->parsed()) {
    if (*q_opt) solve_opts.q = q;
    if (*dense_opt) solve_opts.dense = dense;
    return cmd_solve(config, solve_opts, out, err);
  }
  if (verify->parsed()) return cmd_verify(config, results, threshold, out, err);
  if (oracle->parsed()) return cmd_oracle(config, force_fixed_point, out, err);
  return cmd_export(results, points, out, err);
}

}  // namespace ridge::cli
