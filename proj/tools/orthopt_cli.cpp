// Command-line driver: single runs, solver x problem benchmark matrices, and
// thread-scaling studies. Exit codes for `run`: 0 converged, 2 max-iter,
// 3 diverged, 1 usage or I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orthopt/harness.hpp"
#include "orthopt/report_io.hpp"

using namespace orthopt;

namespace {

ProblemKind parse_problem_kind(const std::string& s) {
  if (s == "p1") return ProblemKind::P1;
  if (s == "p2") return ProblemKind::P2;
  if (s == "p3") return ProblemKind::P3;
  if (s == "p4") return ProblemKind::P4;
  if (s == "p6") return ProblemKind::P6;
  throw CLI::ValidationError("--problem", "unknown problem '" + s + "'");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "plam") return Algorithm::Plam;
  if (s == "pcal") return Algorithm::Pcal;
  if (s == "alm") return Algorithm::Alm;
  if (s == "moptqr") return Algorithm::MoptQr;
  if (s == "plam-da") return Algorithm::PlamDa;
  if (s == "pcal-da") return Algorithm::PcalDa;
  throw CLI::ValidationError("--solver", "unknown solver '" + s + "'");
}

StepsizeRule parse_eta(const std::string& s) {
  StepsizeRule rule;
  if (s == "abb") rule.kind = StepsizeRule::Kind::Abb;
  else if (s == "bb1") rule.kind = StepsizeRule::Kind::Bb1;
  else if (s == "bb2") rule.kind = StepsizeRule::Kind::Bb2;
  else if (s == "diff") rule.kind = StepsizeRule::Kind::Differential;
  else if (s.rfind("const:", 0) == 0) {
    rule.kind = StepsizeRule::Kind::Constant;
    rule.gamma = std::stod(s.substr(6));
  } else {
    throw CLI::ValidationError("--eta", "expected const:G|diff|bb1|bb2|abb, got '" + s + "'");
  }
  return rule;
}

InitialPointSpec parse_init(const std::string& s) {
  InitialPointSpec init;
  if (s == "qr") init.mode = InitMode::Qr;
  else if (s == "a2-ii") init.mode = InitMode::A2TypeII;
  else if (s.rfind("a2-i:", 0) == 0) {
    init.mode = InitMode::A2TypeI;
    init.sigma_lower = std::stod(s.substr(5));
  } else if (s == "a2-i") {
    init.mode = InitMode::A2TypeI;
  } else {
    throw CLI::ValidationError("--init", "expected qr|a2-i:SIGMA|a2-ii, got '" + s + "'");
  }
  return init;
}

double parse_beta(const std::string& s) {
  if (s == "auto") return -1.0;
  return std::stod(s);
}

OperatorMode parse_mode(const std::string& s) {
  if (s == "random") return OperatorMode::RandomSym;
  if (s == "block") return OperatorMode::BlockTridiag;
  throw CLI::ValidationError("--mode", "expected random|block, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Shared flag bundle for run/bench/scaling; strings so that file values and
// CLI overrides merge with CLI > file > default precedence.
struct RunFlags {
  std::string problem = "p2";
  std::int64_t n = 100, p = 5;
  std::string solver = "pcal";
  std::string beta = "auto";
  std::string eta = "abb";
  double tol = 1e-8;
  std::int64_t max_iter = 3000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string init = "qr";
  double alpha = 1.0, kappa = 1.0, theta = 1.01, zeta = 1.01, xi = 1.0;
  std::string mode = "random";
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_threads = true) {
  cmd->add_option("--problem", f.problem, "problem family: p1|p2|p3|p4|p6");
  cmd->add_option("--n", f.n, "row count of the matrix variable");
  cmd->add_option("--p", f.p, "column count of the matrix variable");
  cmd->add_option("--solver", f.solver, "plam|pcal|alm|moptqr|plam-da|pcal-da");
  cmd->add_option("--beta", f.beta, "penalty parameter, or 'auto'");
  cmd->add_option("--eta", f.eta, "stepsize rule: const:G|diff|bb1|bb2|abb");
  cmd->add_option("--tol", f.tol, "relative KKT stopping tolerance");
  cmd->add_option("--max-iter", f.max_iter, "iteration limit");
  cmd->add_option("--seed", f.seed, "64-bit instance seed");
  if (with_threads) cmd->add_option("--threads", f.threads, "worker thread count");
  cmd->add_option("--init", f.init, "start point: qr|a2-i:SIGMA|a2-ii");
  cmd->add_option("--alpha", f.alpha, "p1 density coupling");
  cmd->add_option("--kappa", f.kappa, "p2 linear-term scale");
  cmd->add_option("--theta", f.theta, "p2 eigenvalue decay");
  cmd->add_option("--zeta", f.zeta, "p2 column-norm growth");
  cmd->add_option("--xi", f.xi, "p2 sign-coin bias");
  cmd->add_option("--mode", f.mode, "p1/p6 operator: random|block");
}

ProblemSpec to_problem_spec(const RunFlags& f) {
  ProblemSpec spec;
  spec.kind = parse_problem_kind(f.problem);
  spec.n = f.n;
  spec.p = f.p;
  spec.alpha = f.alpha;
  spec.kappa = f.kappa;
  spec.theta = f.theta;
  spec.zeta = f.zeta;
  spec.xi = f.xi;
  spec.mode = parse_mode(f.mode);
  spec.seed = f.seed;
  return spec;
}

SolverConfig to_solver_config(const RunFlags& f) {
  SolverConfig cfg;
  cfg.algorithm = parse_algorithm(f.solver);
  cfg.beta = parse_beta(f.beta);
  cfg.eta_rule = parse_eta(f.eta);
  cfg.tol_rel_kkt = f.tol;
  cfg.max_iter = f.max_iter;
  cfg.threads = f.threads;
  return cfg;
}

int status_exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return 0;
    case RunStatus::MaxIter: return 2;
    case RunStatus::Diverged: return 3;
  }
  return 1;
}

void apply_file_values(const std::map<std::string, std::string>& kv, RunFlags& f,
                       const CLI::App* cmd) {
  auto overridden = [&](const char* flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  auto set_str = [&](const char* key, const char* flag, std::string& dst) {
    auto it = kv.find(key);
    if (it != kv.end() && !overridden(flag)) dst = it->second;
  };
  auto set_i64 = [&](const char* key, const char* flag, std::int64_t& dst) {
    auto it = kv.find(key);
    if (it != kv.end() && !overridden(flag)) dst = std::stoll(it->second);
  };
  auto set_f64 = [&](const char* key, const char* flag, double& dst) {
    auto it = kv.find(key);
    if (it != kv.end() && !overridden(flag)) dst = std::stod(it->second);
  };
  set_str("problem", "--problem", f.problem);
  set_i64("n", "--n", f.n);
  set_i64("p", "--p", f.p);
  set_str("solver", "--solver", f.solver);
  set_str("beta", "--beta", f.beta);
  set_str("eta", "--eta", f.eta);
  set_f64("tol", "--tol", f.tol);
  set_i64("max_iter", "--max-iter", f.max_iter);
  auto it = kv.find("seed");
  if (it != kv.end() && !overridden("--seed")) f.seed = std::stoull(it->second);
  auto th = kv.find("threads");
  if (th != kv.end() && !overridden("--threads")) f.threads = std::stoi(th->second);
  set_str("init", "--init", f.init);
  set_f64("alpha", "--alpha", f.alpha);
  set_f64("kappa", "--kappa", f.kappa);
  set_f64("theta", "--theta", f.theta);
  set_f64("zeta", "--zeta", f.zeta);
  set_f64("xi", "--xi", f.xi);
  set_str("mode", "--mode", f.mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthonormalization-free solvers for optimization with orthogonality constraints"};
  app.require_subcommand(1);

  RunFlags run_flags;
  std::string run_out, run_trace, save_problem_path, load_problem_path;
  CLI::App* run = app.add_subcommand("run", "solve one instance");
  add_run_flags(run, run_flags);
  run->add_option("--out", run_out, "write the JSON run report here");
  run->add_option("--trace", run_trace, "write the per-iteration CSV trace here");
  run->add_option("--save-problem", save_problem_path, "serialize the generated instance");
  run->add_option("--load-problem", load_problem_path, "solve a serialized instance instead of generating");

  RunFlags bench_flags;
  std::string bench_config, bench_out, bench_problems, bench_solvers, bench_seeds;
  CLI::App* bench = app.add_subcommand("bench", "run a problems x solvers x seeds matrix");
  add_run_flags(bench, bench_flags);
  bench->add_option("--config", bench_config, "key = value matrix definition")->required();
  bench->add_option("--out", bench_out, "summary CSV path (default stdout)");
  bench->add_option("--problems", bench_problems, "comma list, e.g. p1,p2,p3");
  bench->add_option("--solvers", bench_solvers, "comma list, e.g. plam,pcal");
  bench->add_option("--seeds", bench_seeds, "comma list of 64-bit seeds");

  RunFlags scaling_flags;
  std::string scaling_threads = "1,2,4", scaling_out;
  CLI::App* scaling = app.add_subcommand("scaling", "repeat one run across thread counts");
  add_run_flags(scaling, scaling_flags, /*with_threads=*/false);
  scaling->add_option("--threads", scaling_threads, "comma list starting at 1, e.g. 1,2,4,8");
  scaling->add_option("--out", scaling_out, "scaling report JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      const SolverConfig cfg = to_solver_config(run_flags);
      RunReport report;
      if (!load_problem_path.empty()) {
        std::ifstream in(load_problem_path, std::ios::binary);
        if (!in) throw io_error("cannot open " + load_problem_path);
        const auto model = load_problem(in);
        InitialPointSpec init = parse_init(run_flags.init);
        init.seed = run_flags.seed ^ 0x1235713ULL;
        const DenseMatrix x0 = initial_point(init, model->n(), model->p());
        report = solve(*model, cfg, x0);
        report.config.seed = run_flags.seed;
        report.config.init = run_flags.init;
        if (!save_problem_path.empty()) {
          std::ofstream out(save_problem_path, std::ios::binary);
          save_problem(*model, out);
        }
      } else {
        const ProblemSpec spec = to_problem_spec(run_flags);
        if (!save_problem_path.empty()) {
          const auto model = make_problem(spec, cfg.threads);
          std::ofstream out(save_problem_path, std::ios::binary);
          if (!out) throw io_error("cannot open " + save_problem_path);
          save_problem(*model, out);
        }
        report = run_single(spec, cfg, parse_init(run_flags.init));
      }
      if (!run_out.empty()) write_report_file(report, run_out);
      if (!run_trace.empty()) write_trace_file(report, run_trace);
      const FinalMetrics& fin = report.final_post_orth ? *report.final_post_orth
                                                       : report.final_pre_orth;
      std::cout << "status=" << run_status_name(report.status)
                << " iterations=" << report.iterations << " fval=" << fin.fval
                << " kkt_rel=" << fin.kkt_rel << " feas=" << fin.feas
                << " time_s=" << report.wall_time << "\n";
      return status_exit_code(report.status);
    }

    if (bench->parsed()) {
      std::ifstream in(bench_config);
      if (!in) throw io_error("cannot open config " + bench_config);
      const auto kv = parse_key_values(in);
      apply_file_values(kv, bench_flags, bench);
      auto pick_list = [&](const std::string& cli_value, const char* key,
                           const std::string& fallback) {
        if (!cli_value.empty()) return cli_value;
        auto it = kv.find(key);
        return it != kv.end() ? it->second : fallback;
      };
      const std::string problems = pick_list(bench_problems, "problems", bench_flags.problem);
      const std::string solvers = pick_list(bench_solvers, "solvers", bench_flags.solver);
      const std::string seeds = pick_list(bench_seeds, "seeds", std::to_string(bench_flags.seed));

      MatrixSpec spec;
      spec.base = to_solver_config(bench_flags);
      for (const std::string& pname : split_list(problems)) {
        RunFlags pf = bench_flags;
        pf.problem = pname;
        spec.problems.push_back(to_problem_spec(pf));
      }
      for (const std::string& sname : split_list(solvers))
        spec.solvers.push_back(parse_algorithm(sname));
      for (const std::string& seed : split_list(seeds))
        spec.seeds.push_back(std::stoull(seed));
      const InitialPointSpec init = parse_init(bench_flags.init);
      spec.init = init.mode;
      spec.sigma_lower = init.sigma_lower;

      std::string out_path = bench_out;
      if (out_path.empty()) {
        auto it = kv.find("out");
        if (it != kv.end()) out_path = it->second;
      }
      if (out_path.empty()) {
        run_matrix(spec, std::cout);
      } else {
        std::ofstream out(out_path);
        if (!out) throw io_error("cannot open " + out_path);
        run_matrix(spec, out);
      }
      return 0;
    }

    if (scaling->parsed()) {
      std::vector<int> threads;
      for (const std::string& t : split_list(scaling_threads)) threads.push_back(std::stoi(t));
      const ProblemSpec spec = to_problem_spec(scaling_flags);
      SolverConfig cfg = to_solver_config(scaling_flags);
      const ScalingReport report =
          run_scaling(spec, cfg, parse_init(scaling_flags.init), threads);
      if (!report.identical_results) {
        std::cerr << "error: results differ across thread counts\n";
        return 1;
      }
      if (scaling_out.empty()) std::cout << to_json(report) << "\n";
      else write_scaling_file(report, scaling_out);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const parameter_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
