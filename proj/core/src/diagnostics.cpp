#include "orthopt/diagnostics.hpp"

#include <cmath>

#include "orthopt/kernels.hpp"

namespace orthopt {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Plam: return "plam";
    case Algorithm::Pcal: return "pcal";
    case Algorithm::Alm: return "alm";
    case Algorithm::MoptQr: return "moptqr";
    case Algorithm::PlamDa: return "plam-da";
    case Algorithm::PcalDa: return "pcal-da";
  }
  return "?";
}

double kkt_violation(const DenseMatrix& grad_f, const DenseMatrix& x, int threads) {
  if (!grad_f.same_shape(x)) throw dimension_error("kkt_violation: shape mismatch");
  const SquareSymmetric w = sym_part(matmul_at_b(grad_f, x, threads));
  const DenseMatrix xw = matmul(x, w.matrix(), threads);
  return frobenius_norm(add_scaled(grad_f, -1.0, xw));
}

double kkt_violation(const ObjectiveModel& model, const DenseMatrix& x, int threads) {
  return kkt_violation(model.evaluate(x, threads).gradient, x, threads);
}

double feasibility_violation(const DenseMatrix& x, int threads) {
  DenseMatrix c = gram(x, threads).matrix();
  add_scaled_identity_in_place(c, -1.0);
  return frobenius_norm(c);
}

double merit_h(const ObjectiveModel& model, const DenseMatrix& x, double beta,
               int threads) {
  const Evaluation ev = model.evaluate(x, threads);
  const SquareSymmetric w = sym_part(matmul_at_b(ev.gradient, x, threads));
  DenseMatrix c = gram(x, threads).matrix();
  add_scaled_identity_in_place(c, -1.0);
  const double cross = frobenius_inner(w.matrix(), c);
  const double feas2 = frobenius_inner(c, c);
  return ev.value - 0.5 * cross + 0.25 * beta * feas2;
}

namespace {

// Largest eigenvalue of a small symmetric PSD matrix by plain power iteration.
double lambda_max(const SquareSymmetric& b, std::uint64_t seed) {
  return spectral_norm_estimate(b, seed);  // PSD, so sigma_max == lambda_max
}

}  // namespace

FeasibilityBoundResult feasibility_bound_check(const ObjectiveModel& model,
                                               const DenseMatrix& x, double beta,
                                               int threads) {
  FeasibilityBoundResult out;
  const SquareSymmetric b = gram(x, threads);
  const double lmax = lambda_max(b, 0x5ca1e);
  if (!(lmax > 0.0)) return out;  // zero iterate: not applicable
  // lambda_min(B) through a shifted power iteration on (shift·I - B), which is
  // PSD once shift >= lambda_max.
  const double shift = lmax * (1.0 + 1e-8) + 1e-300;
  SquareSymmetric shifted(b.order());
  for (std::int64_t j = 0; j < b.order(); ++j)
    for (std::int64_t i = 0; i <= j; ++i)
      shifted.set_mirrored(i, j, (i == j ? shift - b(i, j) : -b(i, j)));
  const double lmin = std::max(shift - lambda_max(shifted, 0x5ca1f), 0.0);
  if (!(lmin > 0.0)) return out;  // numerically rank deficient

  const Evaluation ev = model.evaluate(x, threads);
  const SquareSymmetric gg = gram(ev.gradient, threads);
  const double grad_2 = std::sqrt(lambda_max(gg, 0x5ca20));
  const double x_2 = std::sqrt(lmax);
  out.delta = beta * lmin - grad_2 * x_2;
  if (!(out.delta > 0.0)) return out;
  out.applicable = true;

  const SquareSymmetric w = sym_part(matmul_at_b(ev.gradient, x, threads));
  DenseMatrix c = b.matrix();
  add_scaled_identity_in_place(c, -1.0);
  DenseMatrix m = c;  // beta·C - W
  {
    double* md = m.data();
    const double* wd = w.matrix().data();
    for (std::size_t k = 0; k < m.size(); ++k) md[k] = beta * md[k] - wd[k];
  }
  const DenseMatrix grad_l = add_scaled(ev.gradient, 1.0, matmul(x, m, threads));
  out.lhs = frobenius_norm(c);
  out.rhs = x_2 / out.delta * frobenius_norm(grad_l);
  out.slack = out.rhs - out.lhs;
  out.holds = out.lhs <= out.rhs;
  return out;
}

double flops_estimate(Algorithm algorithm, std::int64_t n, std::int64_t p) {
  const double np2 = static_cast<double>(n) * static_cast<double>(p) * static_cast<double>(p);
  const double p3 = static_cast<double>(p) * static_cast<double>(p) * static_cast<double>(p);
  switch (algorithm) {
    case Algorithm::MoptQr:
      return 7.0 * np2 + p3 / 3.0;
    case Algorithm::Plam:
    case Algorithm::Pcal:
    case Algorithm::PlamDa:
    case Algorithm::PcalDa:
    case Algorithm::Alm:
      return 7.0 * np2;
  }
  return 0.0;
}

}  // namespace orthopt
