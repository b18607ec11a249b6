#include "orthopt/report_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "orthopt/errors.hpp"

namespace orthopt {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool bits_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

json config_to_json(const ConfigEcho& c) {
  return json{{"problem", c.problem}, {"n", c.n},       {"p", c.p},
              {"solver", c.solver},   {"beta", c.beta}, {"eta_rule", c.eta_rule},
              {"tol_rel_kkt", c.tol_rel_kkt},           {"max_iter", c.max_iter},
              {"threads", c.threads}, {"init", c.init}, {"seed", c.seed},
              {"alpha", c.alpha},     {"kappa", c.kappa}, {"theta", c.theta},
              {"zeta", c.zeta},       {"xi", c.xi},
              {"curvature_scale", c.curvature_scale}};
}

ConfigEcho config_from_json(const json& j) {
  ConfigEcho c;
  c.problem = j.at("problem").get<std::string>();
  c.n = j.at("n").get<std::int64_t>();
  c.p = j.at("p").get<std::int64_t>();
  c.solver = j.at("solver").get<std::string>();
  c.beta = j.at("beta").get<double>();
  c.eta_rule = j.at("eta_rule").get<std::string>();
  c.tol_rel_kkt = j.at("tol_rel_kkt").get<double>();
  c.max_iter = j.at("max_iter").get<std::int64_t>();
  c.threads = j.at("threads").get<int>();
  c.init = j.at("init").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.alpha = j.at("alpha").get<double>();
  c.kappa = j.at("kappa").get<double>();
  c.theta = j.at("theta").get<double>();
  c.zeta = j.at("zeta").get<double>();
  c.xi = j.at("xi").get<double>();
  c.curvature_scale = j.at("curvature_scale").get<double>();
  return c;
}

json final_to_json(const FinalMetrics& f) {
  return json{{"fval", f.fval}, {"kkt_abs", f.kkt_abs}, {"kkt_rel", f.kkt_rel}, {"feas", f.feas}};
}

FinalMetrics final_from_json(const json& j) {
  FinalMetrics f;
  f.fval = j.at("fval").get<double>();
  f.kkt_abs = j.at("kkt_abs").get<double>();
  f.kkt_rel = j.at("kkt_rel").get<double>();
  f.feas = j.at("feas").get<double>();
  return f;
}

}  // namespace

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIter: return "max-iter";
    case RunStatus::Diverged: return "diverged";
  }
  return "?";
}

std::string to_json(const RunReport& r, bool include_timing) {
  json j;
  j["config"] = config_to_json(r.config);
  json trace = json::array();
  for (const MetricSample& s : r.trace) {
    json row{{"iter", s.iter}, {"fval", s.fval},   {"kkt_abs", s.kkt_abs},
             {"kkt_rel", s.kkt_rel}, {"feas", s.feas}, {"eta", s.eta}};
    if (include_timing) row["elapsed"] = s.elapsed;
    trace.push_back(std::move(row));
  }
  j["trace"] = std::move(trace);
  j["final"] = json{{"pre_orth", final_to_json(r.final_pre_orth)}};
  if (r.final_post_orth) j["final"]["post_orth"] = final_to_json(*r.final_post_orth);
  j["iterations"] = r.iterations;
  j["outer_iterations"] = r.outer_iterations;
  j["inner_cap_hits"] = r.inner_cap_hits;
  j["degenerate_steps"] = r.degenerate_steps;
  if (include_timing) j["wall_time"] = r.wall_time;
  j["status"] = run_status_name(r.status);
  return j.dump(2);
}

RunReport run_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunReport r;
  r.config = config_from_json(j.at("config"));
  for (const json& row : j.at("trace")) {
    MetricSample s;
    s.iter = row.at("iter").get<std::int64_t>();
    s.fval = row.at("fval").get<double>();
    s.kkt_abs = row.at("kkt_abs").get<double>();
    s.kkt_rel = row.at("kkt_rel").get<double>();
    s.feas = row.at("feas").get<double>();
    s.eta = row.at("eta").get<double>();
    if (row.contains("elapsed")) s.elapsed = row.at("elapsed").get<double>();
    r.trace.push_back(s);
  }
  r.final_pre_orth = final_from_json(j.at("final").at("pre_orth"));
  if (j.at("final").contains("post_orth"))
    r.final_post_orth = final_from_json(j.at("final").at("post_orth"));
  r.iterations = j.at("iterations").get<std::int64_t>();
  r.outer_iterations = j.at("outer_iterations").get<std::int64_t>();
  r.inner_cap_hits = j.at("inner_cap_hits").get<std::int64_t>();
  r.degenerate_steps = j.at("degenerate_steps").get<std::int64_t>();
  if (j.contains("wall_time")) r.wall_time = j.at("wall_time").get<double>();
  const std::string status = j.at("status").get<std::string>();
  r.status = status == "converged" ? RunStatus::Converged
             : status == "max-iter" ? RunStatus::MaxIter
                                    : RunStatus::Diverged;
  return r;
}

std::string to_json(const ScalingReport& r) {
  json j;
  j["threads"] = r.threads;
  j["wall_times"] = r.wall_times;
  j["speedups"] = r.speedups;
  json cats = json::array();
  for (std::size_t i = 0; i < r.categories.size(); ++i) {
    const CategoryTimers& c = r.categories[i];
    const double total = r.wall_times.size() > i && r.wall_times[i] > 0.0 ? r.wall_times[i] : 0.0;
    json row{{"blas3_s", c.blas3}, {"func_s", c.func}, {"orth_s", c.orth}};
    if (total > 0.0) {
      row["blas3_pct"] = 100.0 * c.blas3 / total;
      row["func_pct"] = 100.0 * c.func / total;
      row["orth_pct"] = 100.0 * c.orth / total;
    }
    cats.push_back(std::move(row));
  }
  j["categories"] = std::move(cats);
  j["identical_results"] = r.identical_results;
  j["hardware_oversubscribed"] = r.hardware_oversubscribed;
  if (!r.runs.empty()) {
    j["iterations"] = r.runs.front().iterations;
    j["status"] = run_status_name(r.runs.front().status);
  }
  return j.dump(2);
}

void write_trace_csv(const RunReport& r, std::ostream& out) {
  out << "iter,fval,kkt_abs,kkt_rel,feas,eta,time_ms\n";
  for (const MetricSample& s : r.trace) {
    out << s.iter << ',' << fmt17(s.fval) << ',' << fmt17(s.kkt_abs) << ','
        << fmt17(s.kkt_rel) << ',' << fmt17(s.feas) << ',' << fmt17(s.eta) << ','
        << fmt17(s.elapsed * 1000.0) << '\n';
  }
}

void write_summary_header(std::ostream& out) {
  out << "problem,solver,seed,n,p,beta,eta_rule,status,iterations,outer_iterations,"
         "fval,kkt_abs,kkt_rel,feas,fval_orth,kkt_abs_orth,kkt_rel_orth,feas_orth,"
         "time_s\n";
}

void write_summary_row(const RunReport& r, std::ostream& out) {
  const ConfigEcho& c = r.config;
  out << c.problem << ',' << c.solver << ',' << c.seed << ',' << c.n << ',' << c.p << ','
      << fmt17(c.beta) << ',' << c.eta_rule << ',' << run_status_name(r.status) << ','
      << r.iterations << ',' << r.outer_iterations << ',' << fmt17(r.final_pre_orth.fval)
      << ',' << fmt17(r.final_pre_orth.kkt_abs) << ',' << fmt17(r.final_pre_orth.kkt_rel)
      << ',' << fmt17(r.final_pre_orth.feas) << ',';
  if (r.final_post_orth) {
    out << fmt17(r.final_post_orth->fval) << ',' << fmt17(r.final_post_orth->kkt_abs) << ','
        << fmt17(r.final_post_orth->kkt_rel) << ',' << fmt17(r.final_post_orth->feas);
  } else {
    out << ",,,";
  }
  out << ',' << fmt17(r.wall_time) << '\n';
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_report_file(const RunReport& r, const std::string& path, bool include_timing) {
  auto out = open_out(path);
  out << to_json(r, include_timing) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

void write_trace_file(const RunReport& r, const std::string& path) {
  auto out = open_out(path);
  write_trace_csv(r, out);
  if (!out) throw io_error("write failed: " + path);
}

void write_scaling_file(const ScalingReport& r, const std::string& path) {
  auto out = open_out(path);
  out << to_json(r) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

namespace {

bool matrices_bits_equal(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double* ad = a.data();
  const double* bd = b.data();
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!bits_equal(ad[k], bd[k])) return false;
  return true;
}

}  // namespace

bool same_numerics(const RunReport& a, const RunReport& b) {
  if (a.status != b.status || a.iterations != b.iterations ||
      a.outer_iterations != b.outer_iterations ||
      a.degenerate_steps != b.degenerate_steps || a.trace.size() != b.trace.size())
    return false;
  if (!matrices_bits_equal(a.stop_iterate, b.stop_iterate) ||
      !matrices_bits_equal(a.final_x, b.final_x))
    return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    const MetricSample& x = a.trace[i];
    const MetricSample& y = b.trace[i];
    if (x.iter != y.iter || !bits_equal(x.fval, y.fval) ||
        !bits_equal(x.kkt_abs, y.kkt_abs) || !bits_equal(x.kkt_rel, y.kkt_rel) ||
        !bits_equal(x.feas, y.feas) || !bits_equal(x.eta, y.eta))
      return false;
  }
  auto final_eq = [](const FinalMetrics& x, const FinalMetrics& y) {
    return bits_equal(x.fval, y.fval) && bits_equal(x.kkt_abs, y.kkt_abs) &&
           bits_equal(x.kkt_rel, y.kkt_rel) && bits_equal(x.feas, y.feas);
  };
  if (!final_eq(a.final_pre_orth, b.final_pre_orth)) return false;
  if (a.final_post_orth.has_value() != b.final_post_orth.has_value()) return false;
  if (a.final_post_orth && !final_eq(*a.final_post_orth, *b.final_post_orth)) return false;
  return true;
}

}  // namespace orthopt
