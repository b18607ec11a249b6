#include <doctest.h>

#include <sstream>

#include "orthopt/harness.hpp"
#include "orthopt/kernels.hpp"
#include "orthopt/report_io.hpp"

using namespace orthopt;

namespace {

ProblemSpec small_p2(std::uint64_t seed) {
  ProblemSpec spec;
  spec.kind = ProblemKind::P2;
  spec.n = 40;
  spec.p = 4;
  spec.seed = seed;
  return spec;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("run_single: same seed twice gives byte-identical JSON") {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::Pcal;
  const RunReport a = run_single(small_p2(5), cfg, {InitMode::Qr, 0.5, 0});
  const RunReport b = run_single(small_p2(5), cfg, {InitMode::Qr, 0.5, 0});
  CHECK(same_numerics(a, b));
  CHECK(to_json(a, /*include_timing=*/false) == to_json(b, /*include_timing=*/false));
}

TEST_CASE("run_single: limit behavior and status propagation") {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::Plam;
  cfg.max_iter = 1;
  const RunReport rep = run_single(small_p2(6), cfg, {InitMode::Qr, 0.5, 0});
  CHECK(rep.status == RunStatus::MaxIter);
  CHECK(rep.trace.size() == 2);

  // A diverging configuration is reported as a row, not an exception.
  SolverConfig bad;
  bad.algorithm = Algorithm::Plam;
  bad.beta = 0.0;
  bad.eta_rule.kind = StepsizeRule::Kind::Constant;
  bad.eta_rule.gamma = 1e-9;
  bad.eta_rule.eta_min = 1e-12;
  const RunReport div = run_single(small_p2(7), bad, {InitMode::A2TypeII, 0.5, 0});
  CHECK(div.status == RunStatus::Diverged);
}

TEST_CASE("run_matrix: row counting and resilience") {
  MatrixSpec spec;
  spec.problems = {small_p2(1)};
  spec.solvers = {Algorithm::Pcal};
  spec.seeds = {1};
  std::ostringstream single;
  run_matrix(spec, single);
  CHECK(count_lines(single.str()) == 2);  // header + one row

  MatrixSpec grid;
  grid.problems = {small_p2(1), [] {
                     ProblemSpec p = small_p2(1);
                     p.kind = ProblemKind::P3;
                     return p;
                   }()};
  grid.solvers = {Algorithm::Plam, Algorithm::Pcal};
  grid.seeds = {1, 2, 3};
  std::ostringstream out;
  run_matrix(grid, out);
  CHECK(count_lines(out.str()) == 1 + 12);

  MatrixSpec empty;
  CHECK_THROWS_AS(run_matrix(empty, out), parameter_error);
}

TEST_CASE("run_matrix: summary rows carry the tabled fields") {
  MatrixSpec spec;
  spec.problems = {small_p2(2)};
  spec.solvers = {Algorithm::Pcal};
  spec.seeds = {2};
  std::ostringstream out;
  run_matrix(spec, out);
  const std::string header = out.str().substr(0, out.str().find('\n'));
  for (const char* col : {"fval", "kkt_abs", "iterations", "feas", "time_s", "status"})
    CHECK(header.find(col) != std::string::npos);
}

TEST_CASE("run_scaling: identity speedup and bitwise agreement") {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::Pcal;
  cfg.max_iter = 30;
  const ScalingReport one = run_scaling(small_p2(3), cfg, {InitMode::Qr, 0.5, 0}, {1});
  CHECK(one.speedups == std::vector<double>{1.0});
  CHECK(one.identical_results);

  const ScalingReport two = run_scaling(small_p2(3), cfg, {InitMode::Qr, 0.5, 0}, {1, 2});
  CHECK(two.identical_results);
  CHECK(two.runs.size() == 2);

  CHECK_THROWS_AS(run_scaling(small_p2(3), cfg, {InitMode::Qr, 0.5, 0}, {2, 4}),
                  parameter_error);
}

TEST_CASE("write_report: empty trace gives a header-only CSV") {
  RunReport empty;
  std::ostringstream out;
  write_trace_csv(empty, out);
  CHECK(out.str() == "iter,fval,kkt_abs,kkt_rel,feas,eta,time_ms\n");
}

TEST_CASE("write_report: JSON round trip reproduces the report") {
  SolverConfig cfg;
  cfg.algorithm = Algorithm::Pcal;
  const RunReport rep = run_single(small_p2(8), cfg, {InitMode::Qr, 0.5, 0});
  const std::string text = to_json(rep, /*include_timing=*/true);
  const RunReport back = run_report_from_json(text);
  CHECK(to_json(back, true) == text);
  CHECK(back.iterations == rep.iterations);
  CHECK(back.status == rep.status);
  CHECK(back.trace.size() == rep.trace.size());
}

TEST_CASE("config parser: comments, trimming, precedence") {
  std::istringstream in(
      "# a comment\n"
      "n = 500\n"
      "solvers = plam,pcal # trailing comment\n"
      "  beta   =  auto  \n"
      "n = 600\n"
      "malformed line without equals\n");
  const auto kv = parse_key_values(in);
  CHECK(kv.at("n") == "600");
  CHECK(kv.at("solvers") == "plam,pcal");
  CHECK(kv.at("beta") == "auto");
  CHECK(kv.size() == 3);
}

TEST_CASE("penalty sweep stays convergent for the normalized solver") {
  // Small-scale version of the beta-insensitivity study.
  ProblemSpec p1;
  p1.kind = ProblemKind::P1;
  p1.n = 50;
  p1.p = 3;
  p1.seed = 9;
  const auto model = make_problem(p1);
  const double s = model->curvature_scale();
  for (double beta : {0.0, 0.01 * s, 0.1 * s, s + 0.1, 10.0 * s + 1.0}) {
    SolverConfig cfg;
    cfg.algorithm = Algorithm::Pcal;
    cfg.beta = beta;
    const RunReport rep = run_single(p1, cfg, {InitMode::Qr, 0.5, 0});
    CHECK(rep.status == RunStatus::Converged);
  }
}

TEST_SUITE_END();
