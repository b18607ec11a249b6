#include "orthopt/problems.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include "orthopt/kernels.hpp"
#include "orthopt/rng.hpp"

namespace orthopt {

namespace {

constexpr char kMagic[8] = {'O', 'C', 'P', 'R', 'O', 'B', '0', '1'};
constexpr std::uint64_t kSpectralSalt = 0x73706563u;  // decorrelates the power-iteration start

void require_stiefel_dims(std::int64_t n, std::int64_t p) {
  if (n < 1 || p < 1 || 2 * p > n)
    throw parameter_error("problem dimensions must satisfy 1 <= p and 2p <= n, got n=" +
                          std::to_string(n) + " p=" + std::to_string(p));
}

void check_finite(const DenseMatrix& g, double f, const char* who) {
  if (!std::isfinite(f) || !all_finite(g))
    throw evaluation_error(std::string(who) + ": non-finite objective or gradient");
}

SquareSymmetric block_tridiag_operator(std::int64_t n) {
  if (n % 5 != 0)
    throw parameter_error("block operator mode requires n divisible by 5, got n=" +
                          std::to_string(n));
  SquareSymmetric l(n);
  for (std::int64_t b = 0; b < n; b += 5)
    for (std::int64_t i = 0; i < 5; ++i) {
      l.set_mirrored(b + i, b + i, 2.0);
      if (i + 1 < 5) l.set_mirrored(b + i, b + i + 1, -1.0);
    }
  return l;
}

SquareSymmetric gen_operator(std::int64_t n, OperatorMode mode, Rng& rng) {
  if (mode == OperatorMode::BlockTridiag) return block_tridiag_operator(n);
  return sym_part(random_normal(n, n, rng));
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::int64_t j = 0; j < a.cols(); ++j)
    for (std::int64_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

// Binary container helpers; the format is little-endian raw bytes, which is
// also the native layout on every supported target.
void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_matrix(std::ostream& out, const DenseMatrix& m) {
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
}
std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
double get_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
DenseMatrix get_matrix(std::istream& in, std::int64_t rows, std::int64_t cols) {
  DenseMatrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(m.size() * sizeof(double)));
  return m;
}
SquareSymmetric get_symmetric(std::istream& in, std::int64_t order) {
  DenseMatrix m = get_matrix(in, order, order);
  SquareSymmetric s(order);
  for (std::int64_t j = 0; j < order; ++j)
    for (std::int64_t i = 0; i <= j; ++i) s.set_mirrored(i, j, m(i, j));
  return s;
}

std::uint32_t kind_tag(ProblemKind k) {
  switch (k) {
    case ProblemKind::P1: return 1;
    case ProblemKind::P2: return 2;
    case ProblemKind::P3: return 3;
    case ProblemKind::P4: return 4;
    case ProblemKind::P6: return 6;
  }
  return 0;
}

}  // namespace

const char* problem_kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::P1: return "p1";
    case ProblemKind::P2: return "p2";
    case ProblemKind::P3: return "p3";
    case ProblemKind::P4: return "p4";
    case ProblemKind::P6: return "p6";
  }
  return "?";
}

QuadraticModel::QuadraticModel(SquareSymmetric a, DenseMatrix g, ProblemKind kind, double s)
    : ObjectiveModel(a.order(), g.cols(), kind, s), a_(std::move(a)), g_(std::move(g)) {
  if (g_.rows() != n_) throw dimension_error("QuadraticModel: G row count must equal n");
}

Evaluation QuadraticModel::evaluate(const DenseMatrix& x, int threads) const {
  if (x.rows() != n_ || x.cols() != p_)
    throw dimension_error("evaluate: iterate shape mismatch");
  DenseMatrix ax = matmul(a_.matrix(), x, threads);
  const double quad = 0.5 * frobenius_inner(x, ax);
  const double lin = frobenius_inner(g_, x);
  Evaluation ev;
  ev.value = quad + lin;
  ev.gradient = add_scaled(ax, 1.0, g_);
  check_finite(ev.gradient, ev.value, "QuadraticModel");
  return ev;
}

BilinearModel::BilinearModel(SquareSymmetric a, SquareSymmetric b, double s)
    : ObjectiveModel(a.order(), b.order(), ProblemKind::P4, s),
      a_(std::move(a)), b_(std::move(b)) {}

Evaluation BilinearModel::evaluate(const DenseMatrix& x, int threads) const {
  if (x.rows() != n_ || x.cols() != p_)
    throw dimension_error("evaluate: iterate shape mismatch");
  DenseMatrix axb = matmul(matmul(a_.matrix(), x, threads), b_.matrix(), threads);
  Evaluation ev;
  ev.value = 0.5 * frobenius_inner(axb, x);
  ev.gradient = std::move(axb);
  check_finite(ev.gradient, ev.value, "BilinearModel");
  return ev;
}

DensityModel::DensityModel(SquareSymmetric l, std::int64_t p, double coeff,
                           ProblemKind kind, OperatorMode mode, double s)
    : ObjectiveModel(l.order(), p, kind, s),
      l_(std::move(l)), coeff_(coeff), mode_(mode), solver_(l_) {
  if (p < 1 || 2 * p > n_)
    throw parameter_error("DensityModel: dimensions must satisfy 2p <= n");
}

Evaluation DensityModel::evaluate(const DenseMatrix& x, int threads) const {
  if (x.rows() != n_) throw dimension_error("evaluate: iterate row count mismatch");
  DenseMatrix lx = matmul(l_.matrix(), x, threads);
  const std::vector<double> rho = row_sq_norms(x);
  const std::vector<double> hartree = solver_.solve(rho);
  double rho_dot_h = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) rho_dot_h += rho[i] * hartree[i];

  Evaluation ev;
  ev.value = 0.5 * frobenius_inner(x, lx);
  ev.gradient = std::move(lx);
  const std::int64_t n = x.rows();
  const std::int64_t p = x.cols();
  if (kind_ == ProblemKind::P1) {
    ev.value += 0.25 * coeff_ * rho_dot_h;
    for (std::int64_t j = 0; j < p; ++j) {
      double* gj = ev.gradient.col(j);
      const double* xj = x.col(j);
      for (std::int64_t i = 0; i < n; ++i)
        gj[i] += coeff_ * hartree[static_cast<std::size_t>(i)] * xj[i];
    }
  } else {
    std::vector<double> cbrt_rho(rho.size());
    double exch = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      cbrt_rho[i] = std::cbrt(rho[i]);
      exch += rho[i] * cbrt_rho[i];
    }
    ev.value += 0.5 * rho_dot_h - 0.75 * coeff_ * exch;
    for (std::int64_t j = 0; j < p; ++j) {
      double* gj = ev.gradient.col(j);
      const double* xj = x.col(j);
      for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t r = static_cast<std::size_t>(i);
        gj[i] += (2.0 * hartree[r] - 2.0 * coeff_ * cbrt_rho[r]) * xj[i];
      }
    }
  }
  check_finite(ev.gradient, ev.value, "DensityModel");
  return ev;
}

std::unique_ptr<ObjectiveModel> gen_problem1(std::int64_t n, std::int64_t p,
                                             double alpha, OperatorMode mode,
                                             std::uint64_t seed, int threads) {
  require_stiefel_dims(n, p);
  if (alpha < 0.0) throw parameter_error("gen_problem1: alpha must be nonnegative");
  Rng rng(seed);
  SquareSymmetric l = gen_operator(n, mode, rng);
  const double s = spectral_norm_estimate(l, seed ^ kSpectralSalt, threads);
  return std::make_unique<DensityModel>(std::move(l), p, alpha, ProblemKind::P1, mode, s);
}

std::unique_ptr<ObjectiveModel> gen_problem2(std::int64_t n, std::int64_t p,
                                             double kappa, double theta,
                                             double zeta, double xi,
                                             std::uint64_t seed, int threads) {
  require_stiefel_dims(n, p);
  if (theta < 1.0 || zeta < 1.0)
    throw parameter_error("gen_problem2: theta and zeta must be at least 1");
  if (kappa < 0.0) throw parameter_error("gen_problem2: kappa must be nonnegative");
  if (xi < 0.0 || xi > 1.0) throw parameter_error("gen_problem2: xi must lie in [0,1]");
  Rng rng(seed);
  // Eigenbasis from a uniform random square matrix, eigenvalues +-theta^(1-i)
  // with a xi-biased sign coin, linear term columns of unit norm scaled by
  // kappa * zeta^(j-1).
  DenseMatrix p_basis = orthonormalize(random_uniform(n, n, rng));
  std::vector<double> lam(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double mag = std::pow(theta, static_cast<double>(-i));
    lam[static_cast<std::size_t>(i)] = (rng.uniform() < xi) ? mag : -mag;
  }
  DenseMatrix pl = p_basis;
  scale_cols_in_place(pl, lam);
  SquareSymmetric a = sym_part(matmul(pl, transpose(p_basis), threads));

  DenseMatrix g = random_uniform(n, p, rng);
  std::vector<double> colscale(static_cast<std::size_t>(p));
  for (std::int64_t j = 0; j < p; ++j) {
    const double nrm = vector_norm(std::span<const double>(g.col(j), static_cast<std::size_t>(n)));
    colscale[static_cast<std::size_t>(j)] =
        (nrm > 0.0 ? kappa * std::pow(zeta, static_cast<double>(j)) / nrm : 0.0);
  }
  scale_cols_in_place(g, colscale);

  const double s = spectral_norm_estimate(a, seed ^ kSpectralSalt, threads);
  auto model = std::make_unique<QuadraticModel>(
      std::move(a), std::move(g), kappa == 0.0 ? ProblemKind::P3 : ProblemKind::P2, s);
  model->kappa = kappa;
  model->theta = theta;
  model->zeta = zeta;
  model->xi = xi;
  return model;
}

std::unique_ptr<ObjectiveModel> gen_problem3(std::int64_t n, std::int64_t p,
                                             double theta, double xi,
                                             std::uint64_t seed, int threads) {
  return gen_problem2(n, p, 0.0, theta, 1.0, xi, seed, threads);
}

std::unique_ptr<ObjectiveModel> gen_problem4(std::int64_t n, std::int64_t p,
                                             std::uint64_t seed, int threads) {
  require_stiefel_dims(n, p);
  Rng rng(seed);
  SquareSymmetric a = sym_part(random_normal(n, n, rng));
  SquareSymmetric b = sym_part(random_normal(p, p, rng));
  const double sa = spectral_norm_estimate(a, seed ^ kSpectralSalt, threads);
  const double sb = spectral_norm_estimate(b, seed ^ (kSpectralSalt + 1), threads);
  return std::make_unique<BilinearModel>(std::move(a), std::move(b), sa * sb);
}

std::unique_ptr<ObjectiveModel> gen_problem6(std::int64_t n, std::int64_t p,
                                             OperatorMode mode, std::uint64_t seed,
                                             int threads) {
  require_stiefel_dims(n, p);
  Rng rng(seed);
  SquareSymmetric l = gen_operator(n, mode, rng);
  const double s = spectral_norm_estimate(l, seed ^ kSpectralSalt, threads);
  const double gamma = 2.0 * std::cbrt(3.0 / 3.14159265358979323846);
  return std::make_unique<DensityModel>(std::move(l), p, gamma, ProblemKind::P6, mode, s);
}

std::unique_ptr<ObjectiveModel> make_quadratic(SquareSymmetric a, DenseMatrix g,
                                               ProblemKind kind, double s, int threads) {
  if (g.empty()) throw dimension_error("make_quadratic: g must be n-by-p");
  if (s < 0.0) s = spectral_norm_estimate(a, kSpectralSalt, threads);
  return std::make_unique<QuadraticModel>(std::move(a), std::move(g), kind, s);
}

double fd_gradient_check(const ObjectiveModel& model, const DenseMatrix& x,
                         double h, std::uint64_t seed) {
  if (!(h > 0.0)) throw parameter_error("fd_gradient_check: h must be positive");
  const Evaluation base = model.evaluate(x, 1);
  const std::int64_t n = x.rows();
  const std::int64_t total = n * x.cols();
  const std::int64_t want = std::min<std::int64_t>(50, total);
  Rng rng(seed);
  std::set<std::int64_t> coords;
  while (static_cast<std::int64_t>(coords.size()) < want)
    coords.insert(static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(total)));

  double worst = 0.0;
  DenseMatrix probe = x;
  for (std::int64_t c : coords) {
    const std::int64_t i = c % n;
    const std::int64_t j = c / n;
    const double x0 = x(i, j);
    const double hh = h * (1.0 + std::abs(x0));
    probe(i, j) = x0 + hh;
    const double fp = model.evaluate(probe, 1).value;
    probe(i, j) = x0 - hh;
    const double fm = model.evaluate(probe, 1).value;
    probe(i, j) = x0;
    const double fd = (fp - fm) / (2.0 * hh);
    const double g = base.gradient(i, j);
    worst = std::max(worst, std::abs(fd - g) / (1.0 + std::abs(g)));
  }
  return worst;
}

void QuadraticModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kind_tag(kind_));
  put_u64(out, static_cast<std::uint64_t>(n_));
  put_u64(out, static_cast<std::uint64_t>(p_));
  put_f64(out, s_);
  put_f64(out, kappa);
  put_f64(out, theta);
  put_f64(out, zeta);
  put_f64(out, xi);
  put_matrix(out, a_.matrix());
  put_matrix(out, g_);
}

void BilinearModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kind_tag(kind_));
  put_u64(out, static_cast<std::uint64_t>(n_));
  put_u64(out, static_cast<std::uint64_t>(p_));
  put_f64(out, s_);
  put_matrix(out, a_.matrix());
  put_matrix(out, b_.matrix());
}

void DensityModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kind_tag(kind_));
  put_u64(out, static_cast<std::uint64_t>(n_));
  put_u64(out, static_cast<std::uint64_t>(p_));
  put_f64(out, s_);
  put_f64(out, coeff_);
  put_u32(out, mode_ == OperatorMode::BlockTridiag ? 1u : 0u);
  put_matrix(out, l_.matrix());
}

void save_problem(const ObjectiveModel& model, std::ostream& out) {
  model.save(out);
  if (!out) throw io_error("save_problem: write failed");
}

std::unique_ptr<ObjectiveModel> load_problem(std::istream& in) {
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw io_error("load_problem: bad magic bytes");
  const std::uint32_t tag = get_u32(in);
  const std::int64_t n = static_cast<std::int64_t>(get_u64(in));
  const std::int64_t p = static_cast<std::int64_t>(get_u64(in));
  const double s = get_f64(in);
  std::unique_ptr<ObjectiveModel> model;
  switch (tag) {
    case 2:
    case 3: {
      const double kappa = get_f64(in);
      const double theta = get_f64(in);
      const double zeta = get_f64(in);
      const double xi = get_f64(in);
      SquareSymmetric a = get_symmetric(in, n);
      DenseMatrix g = get_matrix(in, n, p);
      auto q = std::make_unique<QuadraticModel>(
          std::move(a), std::move(g), tag == 2 ? ProblemKind::P2 : ProblemKind::P3, s);
      q->kappa = kappa;
      q->theta = theta;
      q->zeta = zeta;
      q->xi = xi;
      model = std::move(q);
      break;
    }
    case 4: {
      SquareSymmetric a = get_symmetric(in, n);
      SquareSymmetric b = get_symmetric(in, p);
      model = std::make_unique<BilinearModel>(std::move(a), std::move(b), s);
      break;
    }
    case 1:
    case 6: {
      const double coeff = get_f64(in);
      const OperatorMode mode =
          get_u32(in) == 1u ? OperatorMode::BlockTridiag : OperatorMode::RandomSym;
      SquareSymmetric l = get_symmetric(in, n);
      model = std::make_unique<DensityModel>(
          std::move(l), p, coeff, tag == 1 ? ProblemKind::P1 : ProblemKind::P6, mode, s);
      break;
    }
    default:
      throw io_error("load_problem: unknown kind tag " + std::to_string(tag));
  }
  if (!in) throw io_error("load_problem: truncated stream");
  return model;
}

}  // namespace orthopt
