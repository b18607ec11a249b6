#include "orthopt/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "orthopt/kernels.hpp"
#include "orthopt/parallel.hpp"
#include "orthopt/rng.hpp"

namespace orthopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class ScopedTimer {
public:
  explicit ScopedTimer(double* acc) : acc_(acc) {
    if (acc_) t0_ = Clock::now();
  }
  ~ScopedTimer() {
    if (acc_) *acc_ += seconds_since(t0_);
  }

private:
  double* acc_;
  Clock::time_point t0_;
};

double* blas3_of(CategoryTimers* t) { return t ? &t->blas3 : nullptr; }
double* func_of(CategoryTimers* t) { return t ? &t->func : nullptr; }
double* orth_of(CategoryTimers* t) { return t ? &t->orth : nullptr; }

std::string eta_rule_name(const StepsizeRule& rule) {
  switch (rule.kind) {
    case StepsizeRule::Kind::Constant: return "const:" + std::to_string(rule.gamma);
    case StepsizeRule::Kind::Differential: return "diff";
    case StepsizeRule::Kind::Bb1: return "bb1";
    case StepsizeRule::Kind::Bb2: return "bb2";
    case StepsizeRule::Kind::Abb: return "abb";
  }
  return "?";
}

// Everything the driver needs about one iterate, computed in a single pass:
// objective, gradient, the symmetrized multiplier, the stationarity residual
// matrix grad_f - X·Psi(grad_fᵀX), and XᵀX.
struct IterateData {
  double f = 0.0;
  DenseMatrix grad_f;
  DenseMatrix grad_f_t_x;   // grad_fᵀX
  SquareSymmetric w;        // Psi(grad_fᵀX)
  DenseMatrix kkt_mat;      // grad_f - X·W
  SquareSymmetric xtx;
  DenseMatrix c;            // XᵀX - I (dense)
  double kkt_abs = 0.0;
  double feas = 0.0;
};

IterateData eval_iterate(const ObjectiveModel& model, const DenseMatrix& x,
                         int threads, CategoryTimers* timers) {
  IterateData d;
  {
    ScopedTimer t(func_of(timers));
    Evaluation ev = model.evaluate(x, threads);
    d.f = ev.value;
    d.grad_f = std::move(ev.gradient);
  }
  {
    ScopedTimer t(blas3_of(timers));
    d.grad_f_t_x = matmul_at_b(d.grad_f, x, threads);
    d.w = sym_part(d.grad_f_t_x);
    d.kkt_mat = add_scaled(d.grad_f, -1.0, matmul(x, d.w.matrix(), threads));
    d.xtx = gram(x, threads);
  }
  d.c = d.xtx.matrix();
  add_scaled_identity_in_place(d.c, -1.0);
  d.kkt_abs = frobenius_norm(d.kkt_mat);
  d.feas = frobenius_norm(d.c);
  return d;
}

double relative_kkt(double kkt_abs, double kkt_den) {
  if (kkt_den > 0.0) return kkt_abs / kkt_den;
  return kkt_abs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double clamp_eta(const StepsizeRule& rule, double v) {
  return std::min(std::max(v, rule.eta_min), rule.eta_max);
}

double resolve_eta0(const StepsizeRule& rule, double s, double beta) {
  if (rule.eta0 > 0.0) return clamp_eta(rule, rule.eta0);
  return clamp_eta(rule, s + 2.0 * beta);
}

}  // namespace

void SolverConfig::validate() const {
  if (beta >= 0.0 && !std::isfinite(beta))
    throw parameter_error("SolverConfig: beta must be finite");
  if (!(tol_rel_kkt > 0.0)) throw parameter_error("SolverConfig: tol_rel_kkt must be positive");
  if (max_iter < 1) throw parameter_error("SolverConfig: max_iter must be at least 1");
  if (threads < 1) throw parameter_error("SolverConfig: threads must be at least 1");
  if (!(eta_rule.eta_min < eta_rule.eta_max))
    throw parameter_error("SolverConfig: stepsize safeguard interval is empty");
  if (eta_rule.kind == StepsizeRule::Kind::Constant && !(eta_rule.gamma > 0.0))
    throw parameter_error("SolverConfig: constant stepsize gamma must be positive");
  if (alm.inner_max < 1 || alm.outer_max < 1)
    throw parameter_error("SolverConfig: ALM iteration caps must be at least 1");
}

double resolve_beta(const SolverConfig& config, const ObjectiveModel& model) {
  if (config.beta >= 0.0) return config.beta;
  switch (config.algorithm) {
    case Algorithm::Pcal:
    case Algorithm::PcalDa:
      return 1.0;
    case Algorithm::MoptQr:
      return 0.0;
    case Algorithm::Plam:
    case Algorithm::PlamDa:
    case Algorithm::Alm:
      return model.curvature_scale() + 0.1;
  }
  return 1.0;
}

DenseMatrix initial_point(const InitialPointSpec& spec, std::int64_t n, std::int64_t p) {
  if (n < 1 || p < 1 || 2 * p > n)
    throw parameter_error("initial_point: dimensions must satisfy 2p <= n");
  Rng rng(spec.seed);
  switch (spec.mode) {
    case InitMode::Qr:
      return orthonormalize(random_normal(n, p, rng));
    case InitMode::A2TypeI: {
      const double sl = spec.sigma_lower;
      if (!(sl > 0.0 && sl < 1.0) || sl * sl > 0.5)
        throw parameter_error("initial_point: a2-i requires sigma in (0,1) with sigma^2 <= 1/2");
      DenseMatrix q = orthonormalize(random_normal(n, p, rng));
      std::vector<double> d(static_cast<std::size_t>(p), 1.0);
      d.back() = std::sqrt(1.0 - sl * sl);
      scale_cols_in_place(q, d);
      return q;
    }
    case InitMode::A2TypeII: {
      DenseMatrix q = orthonormalize(random_normal(n, p, rng));
      // Singular values drawn strictly inside the admissible band, bounded
      // away from 1 so the point is genuinely infeasible.
      const double band = 0.9 / std::sqrt(static_cast<double>(p));
      std::vector<double> d(static_cast<std::size_t>(p));
      for (auto& v : d) {
        double sq = 1.0 + band * (2.0 * rng.uniform() - 1.0);
        if (std::abs(sq - 1.0) < 0.1 * band) sq = 1.0 + 0.1 * band;
        v = std::sqrt(sq);
      }
      scale_cols_in_place(q, d);
      return q;
    }
  }
  throw parameter_error("initial_point: unknown mode");
}

DenseMatrix aug_lag_gradient(const DenseMatrix& grad_f, const DenseMatrix& x,
                             const SquareSymmetric& lambda, double beta, int threads) {
  if (!grad_f.same_shape(x)) throw dimension_error("aug_lag_gradient: shape mismatch");
  if (lambda.order() != x.cols())
    throw dimension_error("aug_lag_gradient: multiplier order mismatch");
  if (beta < 0.0) throw parameter_error("aug_lag_gradient: beta must be nonnegative");
  DenseMatrix m = gram(x, threads).matrix();
  add_scaled_identity_in_place(m, -1.0);
  {
    double* md = m.data();
    const double* ld = lambda.matrix().data();
    for (std::size_t k = 0; k < m.size(); ++k) md[k] = beta * md[k] - ld[k];
  }
  DenseMatrix out = add_scaled(grad_f, 1.0, matmul(x, m, threads));
  if (!all_finite(out)) throw evaluation_error("aug_lag_gradient: non-finite result");
  return out;
}

SquareSymmetric multiplier_plam(const DenseMatrix& grad_f, const DenseMatrix& x,
                                int threads) {
  if (!grad_f.same_shape(x)) throw dimension_error("multiplier_plam: shape mismatch");
  return sym_part(matmul_at_b(grad_f, x, threads));
}

SquareSymmetric multiplier_pcal(const ObjectiveModel& model, const DenseMatrix& x,
                                double beta, int threads) {
  const Evaluation ev = model.evaluate(x, threads);
  SquareSymmetric w = multiplier_plam(ev.gradient, x, threads);
  const DenseMatrix g = aug_lag_gradient(ev.gradient, x, w, beta, threads);
  // Phi(Xᵀ·g): only the diagonal is needed, one dot per column.
  const std::int64_t n = x.rows();
  for (std::int64_t j = 0; j < x.cols(); ++j) {
    const double* xj = x.col(j);
    const double* gj = g.col(j);
    double d = 0.0;
    for (std::int64_t i = 0; i < n; ++i) d += xj[i] * gj[i];
    w.set_mirrored(j, j, w(j, j) + d);
  }
  return w;
}

double stepsize_select(const StepsizeRule& rule, const SolverState& state) {
  if (rule.kind == StepsizeRule::Kind::Constant) return clamp_eta(rule, rule.gamma);
  const double fallback = state.eta > 0.0 ? state.eta : state.eta0;
  if (!state.prev_x || !state.prev_grad_l || state.iter == 0)
    return clamp_eta(rule, state.eta0 > 0.0 ? state.eta0 : fallback);

  const DenseMatrix s = add_scaled(state.x, -1.0, *state.prev_x);
  const DenseMatrix y = add_scaled(state.grad_l, -1.0, *state.prev_grad_l);
  const double ss = frobenius_inner(s, s);
  const double sy = frobenius_inner(s, y);
  const double yy = frobenius_inner(y, y);

  auto bb1 = [&]() {
    if (ss == 0.0 || sy == 0.0) return fallback;
    return std::abs(sy) / ss;
  };
  auto bb2 = [&]() {
    if (sy == 0.0) return fallback;
    return yy / std::abs(sy);
  };

  double eta = fallback;
  switch (rule.kind) {
    case StepsizeRule::Kind::Bb1:
      eta = bb1();
      break;
    case StepsizeRule::Kind::Bb2:
      eta = bb2();
      break;
    case StepsizeRule::Kind::Abb:
      eta = (state.iter % 2 == 1) ? bb1() : bb2();
      break;
    case StepsizeRule::Kind::Differential:
      eta = (ss == 0.0) ? fallback : std::sqrt(yy) / std::sqrt(ss);
      break;
    case StepsizeRule::Kind::Constant:
      break;
  }
  return clamp_eta(rule, eta);
}

DenseMatrix plam_step(const DenseMatrix& x, const DenseMatrix& grad_l, double eta,
                      double beta) {
  if (!(eta > 0.0)) throw parameter_error("plam_step: eta must be positive");
  DenseMatrix next = add_scaled(x, -1.0 / eta, grad_l);
  if (!all_finite(next))
    throw divergence_error("plam_step: non-finite iterate (beta=" + std::to_string(beta) +
                           ", eta=" + std::to_string(eta) + ")",
                           beta, eta);
  return next;
}

PcalStepResult pcal_step(const DenseMatrix& x, const DenseMatrix& grad_l,
                         double eta, int threads) {
  if (!(eta > 0.0)) throw parameter_error("pcal_step: eta must be positive");
  if (!grad_l.same_shape(x)) throw dimension_error("pcal_step: shape mismatch");
  const std::int64_t n = x.rows();
  PcalStepResult out;
  out.x = DenseMatrix(n, x.cols());
  std::vector<std::int64_t> degenerate(static_cast<std::size_t>(x.cols()), 0);
  const double inv_eta = 1.0 / eta;
  parallel_for_columns(x.cols(), threads, [&](std::int64_t j) {
    double* zj = out.x.col(j);
    const double* xj = x.col(j);
    const double* gj = grad_l.col(j);
    double nrm2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double v = xj[i] - inv_eta * gj[i];
      zj[i] = v;
      nrm2 += v * v;
    }
    double nrm = std::sqrt(nrm2);
    if (nrm < 1e-14) {
      // Degenerate update: keep the previous column, renormalized.
      degenerate[static_cast<std::size_t>(j)] = 1;
      double pn = 0.0;
      for (std::int64_t i = 0; i < n; ++i) pn += xj[i] * xj[i];
      pn = std::sqrt(pn);
      if (pn > 0.0) {
        const double inv = 1.0 / pn;
        for (std::int64_t i = 0; i < n; ++i) zj[i] = xj[i] * inv;
      } else {
        for (std::int64_t i = 0; i < n; ++i) zj[i] = 0.0;
        zj[j % n] = 1.0;
      }
      return;
    }
    const double inv = 1.0 / nrm;
    for (std::int64_t i = 0; i < n; ++i) zj[i] *= inv;
  });
  for (std::int64_t c : degenerate) out.degenerate_columns += c;
  if (!all_finite(out.x))
    throw divergence_error("pcal_step: non-finite iterate (eta=" + std::to_string(eta) + ")",
                           0.0, eta);
  return out;
}

DenseMatrix moptqr_step(const DenseMatrix& x, const DenseMatrix& grad_f,
                        double eta, int threads) {
  if (!(eta > 0.0)) throw parameter_error("moptqr_step: eta must be positive");
  const DenseMatrix m = matmul_at_b(grad_f, x, threads);
  const DenseMatrix d = add_scaled(grad_f, -1.0, matmul(x, m, threads));
  const DenseMatrix v = add_scaled(x, -1.0 / eta, d);
  return orthonormalize(v);
}

namespace {

RunReport iterate_main(const ObjectiveModel& model, const SolverConfig& config,
                       const DenseMatrix& x0, CategoryTimers* timers) {
  const auto t0 = Clock::now();
  const double beta = resolve_beta(config, model);
  const int threads = config.threads;
  const Algorithm alg = config.algorithm;
  const bool da = alg == Algorithm::PlamDa || alg == Algorithm::PcalDa;
  const bool normalized = alg == Algorithm::Pcal || alg == Algorithm::PcalDa;
  const bool retraction = alg == Algorithm::MoptQr;
  const bool pcal_formula =
      alg == Algorithm::Pcal && config.multiplier_rule == MultiplierRule::PcalFormula;

  RunReport rep;
  rep.config.solver = algorithm_name(alg);
  rep.config.beta = beta;
  rep.config.eta_rule = eta_rule_name(config.eta_rule);
  rep.config.tol_rel_kkt = config.tol_rel_kkt;
  rep.config.max_iter = config.max_iter;
  rep.config.threads = threads;
  rep.config.n = model.n();
  rep.config.p = model.p();
  rep.config.problem = problem_kind_name(model.kind());
  rep.config.curvature_scale = model.curvature_scale();

  SolverState st;
  st.x = x0;
  st.eta0 = resolve_eta0(config.eta_rule, model.curvature_scale(), beta);

  auto record = [&](std::int64_t iter, const IterateData& d, double eta, double kkt_den) {
    MetricSample s;
    s.iter = iter;
    s.fval = d.f;
    s.kkt_abs = d.kkt_abs;
    s.kkt_rel = relative_kkt(d.kkt_abs, kkt_den);
    s.feas = d.feas;
    s.eta = eta;
    s.elapsed = seconds_since(t0);
    rep.trace.push_back(s);
    return s.kkt_rel;
  };

  rep.status = RunStatus::MaxIter;
  try {
    IterateData data = eval_iterate(model, st.x, threads, timers);
    const double kkt_den = data.kkt_abs;
    double rel = record(0, data, st.eta0, kkt_den);
    if (rel < config.tol_rel_kkt) {
      rep.status = RunStatus::Converged;
    } else {
      for (std::int64_t k = 0; k < config.max_iter; ++k) {
        // Multiplier and augmented-Lagrangian gradient at the current iterate.
        if (retraction) {
          ScopedTimer t(blas3_of(timers));
          st.grad_l = add_scaled(data.grad_f, -1.0,
                                 matmul(st.x, data.grad_f_t_x, threads));
        } else if (da) {
          if (k == 0) st.lambda = data.w;
          else st.lambda = st.lambda.add_scaled(
                   -beta, data.xtx.add_scaled(-1.0, SquareSymmetric::identity(model.p())));
          DenseMatrix m = data.c;
          double* md = m.data();
          const double* ld = st.lambda.matrix().data();
          for (std::size_t q = 0; q < m.size(); ++q) md[q] = beta * md[q] - ld[q];
          ScopedTimer t(blas3_of(timers));
          st.grad_l = add_scaled(data.grad_f, 1.0, matmul(st.x, m, threads));
        } else {
          st.lambda = data.w;
          DenseMatrix g_plam;
          {
            ScopedTimer t(blas3_of(timers));
            g_plam = add_scaled(data.kkt_mat, beta, matmul(st.x, data.c, threads));
          }
          if (pcal_formula) {
            // Diagonal correction: grad_l column j loses d_j·X_j where
            // d_j = X_jᵀ(grad L at the symmetrized multiplier).
            const std::int64_t n = model.n();
            st.grad_l = g_plam;
            for (std::int64_t j = 0; j < model.p(); ++j) {
              const double* xj = st.x.col(j);
              const double* gj = g_plam.col(j);
              double dj = 0.0;
              for (std::int64_t i = 0; i < n; ++i) dj += xj[i] * gj[i];
              st.lambda.set_mirrored(j, j, st.lambda(j, j) + dj);
              double* oj = st.grad_l.col(j);
              for (std::int64_t i = 0; i < n; ++i) oj[i] -= dj * xj[i];
            }
          } else {
            st.grad_l = std::move(g_plam);
          }
        }

        st.iter = k;
        const double eta = stepsize_select(config.eta_rule, st);

        DenseMatrix x_next;
        if (retraction) {
          DenseMatrix v = add_scaled(st.x, -1.0 / eta, st.grad_l);
          ScopedTimer t(orth_of(timers));
          x_next = orthonormalize(v);
        } else if (normalized) {
          PcalStepResult r = pcal_step(st.x, st.grad_l, eta, threads);
          rep.degenerate_steps += r.degenerate_columns;
          x_next = std::move(r.x);
        } else {
          x_next = plam_step(st.x, st.grad_l, eta, beta);
        }

        st.prev_x = std::move(st.x);
        st.prev_grad_l = std::move(st.grad_l);
        st.x = std::move(x_next);
        st.eta = eta;

        data = eval_iterate(model, st.x, threads, timers);
        rep.iterations = k + 1;
        rel = record(k + 1, data, eta, kkt_den);
        if (rel < config.tol_rel_kkt) {
          rep.status = RunStatus::Converged;
          break;
        }
      }
    }

    rep.final_pre_orth = {data.f, data.kkt_abs, rel, data.feas};
    rep.stop_iterate = st.x;
    rep.final_x = st.x;
    if (config.final_orth) {
      try {
        DenseMatrix q;
        {
          ScopedTimer t(orth_of(timers));
          q = orthonormalize(st.x);
        }
        IterateData post = eval_iterate(model, q, threads, timers);
        rep.final_post_orth = FinalMetrics{post.f, post.kkt_abs,
                                           relative_kkt(post.kkt_abs, kkt_den), post.feas};
        rep.final_x = std::move(q);
      } catch (const rank_error&) {
        // Rank-deficient stop iterate: the post-process is unavailable.
      }
    }
  } catch (const divergence_error&) {
    rep.status = RunStatus::Diverged;
  } catch (const evaluation_error&) {
    rep.status = RunStatus::Diverged;
  } catch (const rank_error&) {
    rep.status = RunStatus::Diverged;
  }
  if (rep.status == RunStatus::Diverged && !rep.trace.empty()) {
    const MetricSample& last = rep.trace.back();
    rep.final_pre_orth = {last.fval, last.kkt_abs, last.kkt_rel, last.feas};
    rep.final_post_orth.reset();
  }
  rep.wall_time = seconds_since(t0);
  return rep;
}

}  // namespace

RunReport alm_outer(const ObjectiveModel& model, const SolverConfig& config,
                    const DenseMatrix& x0, CategoryTimers* timers) {
  const auto t0 = Clock::now();
  const double beta = resolve_beta(config, model);
  const int threads = config.threads;

  RunReport rep;
  rep.config.solver = algorithm_name(Algorithm::Alm);
  rep.config.beta = beta;
  rep.config.eta_rule = eta_rule_name(config.eta_rule);
  rep.config.tol_rel_kkt = config.tol_rel_kkt;
  rep.config.max_iter = config.max_iter;
  rep.config.threads = threads;
  rep.config.n = model.n();
  rep.config.p = model.p();
  rep.config.problem = problem_kind_name(model.kind());
  rep.config.curvature_scale = model.curvature_scale();

  const double eta0 = resolve_eta0(config.eta_rule, model.curvature_scale(), beta);

  auto record = [&](std::int64_t iter, const IterateData& d, double eta, double kkt_den) {
    MetricSample s;
    s.iter = iter;
    s.fval = d.f;
    s.kkt_abs = d.kkt_abs;
    s.kkt_rel = relative_kkt(d.kkt_abs, kkt_den);
    s.feas = d.feas;
    s.eta = eta;
    s.elapsed = seconds_since(t0);
    rep.trace.push_back(s);
    return s.kkt_rel;
  };

  rep.status = RunStatus::MaxIter;
  try {
    DenseMatrix x = x0;
    IterateData data = eval_iterate(model, x, threads, timers);
    const double kkt_den = data.kkt_abs;
    double rel = record(0, data, eta0, kkt_den);
    SquareSymmetric lambda = data.w;  // closed-form start for the dual variables
    bool done = rel < config.tol_rel_kkt;
    if (done) rep.status = RunStatus::Converged;

    auto grad_at = [&](const DenseMatrix& xi, const IterateData& di) {
      DenseMatrix m = di.c;
      double* md = m.data();
      const double* ld = lambda.matrix().data();
      for (std::size_t q = 0; q < m.size(); ++q) md[q] = beta * md[q] - ld[q];
      ScopedTimer t(blas3_of(timers));
      return add_scaled(di.grad_f, 1.0, matmul(xi, m, threads));
    };

    std::int64_t total_inner = 0;
    while (!done && rep.outer_iterations < config.alm.outer_max &&
           total_inner < config.max_iter) {
      const double tol_k =
          std::max(config.alm.inner_tol_scale * config.tol_rel_kkt,
                   std::pow(config.alm.inner_tol_scale,
                            static_cast<double>(rep.outer_iterations + 1))) *
          (kkt_den > 0.0 ? kkt_den : 1.0);

      SolverState st;
      st.x = x;
      st.eta0 = eta0;
      bool inner_met = false;
      DenseMatrix best_x = x;
      IterateData best_data = data;
      double best_norm = std::numeric_limits<double>::infinity();

      for (int inner = 0; inner < config.alm.inner_max && total_inner < config.max_iter;
           ++inner) {
        st.grad_l = grad_at(st.x, data);
        const double gl_norm = frobenius_norm(st.grad_l);
        if (gl_norm < best_norm) {
          best_norm = gl_norm;
          best_x = st.x;
          best_data = data;
        }
        if (gl_norm <= tol_k) {
          inner_met = true;
          break;
        }
        st.iter = inner;
        const double eta = stepsize_select(config.eta_rule, st);
        DenseMatrix x_next = plam_step(st.x, st.grad_l, eta, beta);
        st.prev_x = std::move(st.x);
        st.prev_grad_l = std::move(st.grad_l);
        st.x = std::move(x_next);
        st.eta = eta;
        ++total_inner;
        data = eval_iterate(model, st.x, threads, timers);
        rel = record(total_inner, data, eta, kkt_den);
        if (rel < config.tol_rel_kkt) {
          done = true;
          rep.status = RunStatus::Converged;
          break;
        }
      }
      if (done) {
        x = std::move(st.x);
        break;
      }
      if (!inner_met) {
        ++rep.inner_cap_hits;
        x = std::move(best_x);  // proceed from the best iterate seen
        data = best_data;
      } else {
        x = std::move(st.x);
      }
      lambda = lambda.add_scaled(
          -beta, data.xtx.add_scaled(-1.0, SquareSymmetric::identity(model.p())));
      ++rep.outer_iterations;
    }
    rep.iterations = total_inner;
    rep.final_pre_orth = {data.f, data.kkt_abs, rel, data.feas};
    rep.stop_iterate = x;
    rep.final_x = x;
    if (config.final_orth) {
      try {
        DenseMatrix q;
        {
          ScopedTimer t(orth_of(timers));
          q = orthonormalize(x);
        }
        IterateData post = eval_iterate(model, q, threads, timers);
        rep.final_post_orth = FinalMetrics{post.f, post.kkt_abs,
                                           relative_kkt(post.kkt_abs, kkt_den), post.feas};
        rep.final_x = std::move(q);
      } catch (const rank_error&) {
        // Rank-deficient stop iterate: the post-process is unavailable.
      }
    }
  } catch (const divergence_error&) {
    rep.status = RunStatus::Diverged;
  } catch (const evaluation_error&) {
    rep.status = RunStatus::Diverged;
  } catch (const rank_error&) {
    rep.status = RunStatus::Diverged;
  }
  if (rep.status == RunStatus::Diverged && !rep.trace.empty()) {
    const MetricSample& last = rep.trace.back();
    rep.final_pre_orth = {last.fval, last.kkt_abs, last.kkt_rel, last.feas};
    rep.final_post_orth.reset();
  }
  rep.wall_time = seconds_since(t0);
  return rep;
}

RunReport solve(const ObjectiveModel& model, const SolverConfig& config,
                const DenseMatrix& x0, CategoryTimers* timers) {
  config.validate();
  if (x0.rows() != model.n() || x0.cols() != model.p())
    throw dimension_error("solve: start point shape mismatch");
  if (config.algorithm == Algorithm::Alm) return alm_outer(model, config, x0, timers);
  return iterate_main(model, config, x0, timers);
}

}  // namespace orthopt
