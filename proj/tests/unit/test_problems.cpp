#include <doctest.h>

#include <cmath>
#include <sstream>

#include "orthopt/kernels.hpp"
#include "orthopt/problems.hpp"
#include "orthopt/rng.hpp"
#include "orthopt/solver.hpp"
#include "support/oracles.hpp"

using namespace orthopt;

namespace {

DenseMatrix randn(std::int64_t r, std::int64_t c, std::uint64_t seed) {
  Rng rng(seed);
  return random_normal(r, c, rng);
}

DenseMatrix feasible_point(std::int64_t n, std::int64_t p, std::uint64_t seed) {
  return orthonormalize(randn(n, p, seed));
}

// Gradient corrupted by a constant offset; used to show the finite-difference
// check actually detects a broken gradient.
class PerturbedModel : public ObjectiveModel {
public:
  PerturbedModel(const ObjectiveModel& inner, double bump)
      : ObjectiveModel(inner.n(), inner.p(), inner.kind(), inner.curvature_scale()),
        inner_(inner), bump_(bump) {}
  Evaluation evaluate(const DenseMatrix& x, int threads) const override {
    Evaluation ev = inner_.evaluate(x, threads);
    for (double& v : ev.gradient.values()) v += bump_;
    return ev;
  }
  void save(std::ostream&) const override {}

private:
  const ObjectiveModel& inner_;
  double bump_;
};

}  // namespace

TEST_SUITE_BEGIN("problems");

TEST_CASE("p1: zero point, quadratic reduction, gradient check") {
  const auto model = gen_problem1(50, 4, 1.0, OperatorMode::RandomSym, 7);
  const Evaluation at0 = model->evaluate(DenseMatrix(50, 4));
  CHECK(at0.value == 0.0);
  CHECK(frobenius_norm(at0.gradient) == 0.0);

  const auto quad = gen_problem1(30, 3, 0.0, OperatorMode::RandomSym, 8);
  const auto* dm = dynamic_cast<const DensityModel*>(quad.get());
  REQUIRE(dm != nullptr);
  const DenseMatrix x = randn(30, 3, 9);
  const Evaluation ev = quad->evaluate(x);
  const DenseMatrix lx = matmul(dm->l().matrix(), x);
  CHECK(ev.value == doctest::Approx(0.5 * frobenius_inner(x, lx)).epsilon(1e-14));
  CHECK(frobenius_norm(add_scaled(ev.gradient, -1.0, lx)) <= 1e-13 * frobenius_norm(lx));

  const DenseMatrix y = randn(50, 4, 10);
  CHECK(fd_gradient_check(*model, y) <= 1e-6);
}

TEST_CASE("p1 block mode requires n divisible by 5 and is SPD-solvable") {
  CHECK_THROWS_AS(gen_problem1(52, 4, 1.0, OperatorMode::BlockTridiag, 1), parameter_error);
  const auto model = gen_problem1(50, 4, 1.0, OperatorMode::BlockTridiag, 1);
  CHECK(model->curvature_scale() == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-4));
  const DenseMatrix x = randn(50, 4, 2);
  CHECK(fd_gradient_check(*model, x) <= 1e-6);
}

TEST_CASE("p2 construction: theta=1 gives identity spectrum, zeta=1 unit columns") {
  const auto id_a = gen_problem2(20, 2, 0.0, 1.0, 1.0, 1.0, 3);
  CHECK(id_a->kind() == ProblemKind::P3);
  const DenseMatrix xf = feasible_point(20, 2, 4);
  const Evaluation ev = id_a->evaluate(xf);
  CHECK(ev.value == doctest::Approx(1.0).epsilon(1e-12));  // p/2 on the feasible set
  CHECK(frobenius_norm(add_scaled(ev.gradient, -1.0, xf)) <= 1e-12);

  const double kappa = 2.5;
  const auto g_model = gen_problem2(20, 3, kappa, 1.01, 1.0, 1.0, 5);
  const auto* qm = dynamic_cast<const QuadraticModel*>(g_model.get());
  REQUIRE(qm != nullptr);
  for (std::int64_t j = 0; j < 3; ++j) {
    const double nrm = vector_norm(
        std::span<const double>(qm->g().col(j), static_cast<std::size_t>(20)));
    CHECK(nrm == doctest::Approx(kappa).epsilon(1e-13));
  }
}

TEST_CASE("p2 spectrum matches the signed power-law construction") {
  const double theta = 1.3;
  const auto model = gen_problem2(10, 2, 1.0, theta, 1.01, 1.0, 6);
  const auto* qm = dynamic_cast<const QuadraticModel*>(model.get());
  REQUIRE(qm != nullptr);
  auto ev = oracles::jacobi_eigenvalues(qm->a().matrix());
  std::vector<double> mags;
  for (double v : ev) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  for (int i = 0; i < 10; ++i)
    CHECK(mags[static_cast<std::size_t>(i)] ==
          doctest::Approx(std::pow(theta, -i)).epsilon(1e-10));

  // Largest magnitude is theta^0 = 1; the curvature scale must see it.
  const auto big = gen_problem2(60, 4, 1.0, 1.01, 1.01, 1.0, 7);
  CHECK(big->curvature_scale() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("p2 gradient check is at finite-difference accuracy for quadratics") {
  const auto model = gen_problem2(30, 3, 1.0, 1.01, 1.01, 1.0, 8);
  const DenseMatrix x = randn(30, 3, 9);
  // Central differences are exact on quadratics, so the step only sets the
  // rounding noise floor; a wider step keeps the check at 1e-10.
  CHECK(fd_gradient_check(*model, x, 1e-4) <= 1e-10);
}

TEST_CASE("p4: identity pair, zero B, gradient check") {
  DenseMatrix g0(12, 3);
  const DenseMatrix xf = feasible_point(12, 3, 11);
  {
    const BilinearModel model(SquareSymmetric::identity(12), SquareSymmetric::identity(3), 1.0);
    const Evaluation ev = model.evaluate(xf);
    CHECK(ev.value == doctest::Approx(1.5).epsilon(1e-12));  // p/2
    CHECK(frobenius_norm(add_scaled(ev.gradient, -1.0, xf)) <= 1e-12);
  }
  {
    const BilinearModel model(sym_part(randn(12, 12, 12)), SquareSymmetric(3), 1.0);
    const Evaluation ev = model.evaluate(xf);
    CHECK(ev.value == 0.0);
    CHECK(frobenius_norm(ev.gradient) == 0.0);
  }
  const auto model = gen_problem4(40, 5, 13);
  const DenseMatrix x = randn(40, 5, 14);
  CHECK(fd_gradient_check(*model, x, 1e-3) <= 1e-10);
}

TEST_CASE("p6: zero point, exchange term value, gradient check away from zero density") {
  const auto model = gen_problem6(50, 4, OperatorMode::RandomSym, 15);
  CHECK(model->evaluate(DenseMatrix(50, 4)).value == 0.0);

  // X whose density is exactly 1 in every row: the exchange term contributes
  // -(3/4)·gamma·n on top of the L-dependent terms.
  const std::int64_t n = 50;
  DenseMatrix ones_col(n, 4);
  for (std::int64_t i = 0; i < n; ++i) ones_col(i, 0) = 1.0;
  const auto* dm = dynamic_cast<const DensityModel*>(model.get());
  REQUIRE(dm != nullptr);
  const double gamma = dm->gamma();
  CHECK(gamma == doctest::Approx(2.0 * std::cbrt(3.0 / 3.14159265358979323846)).epsilon(1e-15));
  const Evaluation ev = model->evaluate(ones_col);
  // Rebuild the two L terms directly and subtract.
  const DenseMatrix lx = matmul(dm->l().matrix(), ones_col);
  const auto rho = row_sq_norms(ones_col);
  const LinearSolver solver(dm->l());
  const auto hart = solver.solve(rho);
  double rh = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) rh += rho[i] * hart[i];
  const double expected_exchange = -(0.75) * gamma * static_cast<double>(n);
  CHECK(ev.value - (0.5 * frobenius_inner(ones_col, lx) + 0.5 * rh) ==
        doctest::Approx(expected_exchange).epsilon(1e-12));

  DenseMatrix x = randn(50, 4, 16);
  auto dens = row_sq_norms(x);
  REQUIRE(*std::min_element(dens.begin(), dens.end()) >= 1e-3);
  CHECK(fd_gradient_check(*model, x) <= 1e-5);
}

TEST_CASE("evaluate decreases along the negative gradient") {
  const DenseMatrix x0 = randn(30, 3, 17);
  auto check_descent = [&](const ObjectiveModel& m) {
    const Evaluation ev = m.evaluate(x0);
    const double g2 = frobenius_inner(ev.gradient, ev.gradient);
    if (g2 == 0.0) return;
    const double t = 1e-6 / (1.0 + std::sqrt(g2));
    const DenseMatrix x1 = add_scaled(x0, -t, ev.gradient);
    CHECK(m.evaluate(x1).value < ev.value);
  };
  check_descent(*gen_problem1(30, 3, 1.0, OperatorMode::RandomSym, 18));
  check_descent(*gen_problem2(30, 3, 1.0, 1.01, 1.01, 1.0, 19));
  check_descent(*gen_problem4(30, 3, 20));
  check_descent(*gen_problem6(30, 3, OperatorMode::RandomSym, 21));
}

TEST_CASE("fd_gradient_check flags a corrupted gradient") {
  const auto model = gen_problem2(30, 3, 1.0, 1.01, 1.01, 1.0, 22);
  DenseMatrix x = randn(30, 3, 23);
  // Keep gradient entries modest so the relative detection bound is sharp.
  for (double& v : x.values()) v *= 0.1;
  const PerturbedModel bad(*model, 1e-3);
  CHECK(fd_gradient_check(bad, x) >= 5e-4);
}

TEST_CASE("density is invariant under right-rotation") {
  const DenseMatrix x = randn(40, 5, 24);
  const DenseMatrix q = orthonormalize(randn(5, 5, 25));
  const DenseMatrix xq = matmul(x, q);
  const auto r1 = row_sq_norms(x);
  const auto r2 = row_sq_norms(xq);
  for (std::size_t i = 0; i < r1.size(); ++i)
    CHECK(r2[i] == doctest::Approx(r1[i]).epsilon(1e-12));

  const auto model = gen_problem1(40, 5, 1.0, OperatorMode::RandomSym, 26);
  CHECK(model->evaluate(xq).value == doctest::Approx(model->evaluate(x).value).epsilon(1e-11));
}

TEST_CASE("generation is bitwise reproducible per seed") {
  auto dump = [](const ObjectiveModel& m) {
    std::ostringstream os;
    save_problem(m, os);
    return os.str();
  };
  CHECK(dump(*gen_problem2(25, 3, 1.0, 1.01, 1.01, 1.0, 99)) ==
        dump(*gen_problem2(25, 3, 1.0, 1.01, 1.01, 1.0, 99)));
  CHECK(dump(*gen_problem2(25, 3, 1.0, 1.01, 1.01, 1.0, 99)) !=
        dump(*gen_problem2(25, 3, 1.0, 1.01, 1.01, 1.0, 100)));
  CHECK(dump(*gen_problem4(25, 3, 5)) == dump(*gen_problem4(25, 3, 5)));
  CHECK(dump(*gen_problem1(25, 3, 1.0, OperatorMode::RandomSym, 5)) ==
        dump(*gen_problem1(25, 3, 1.0, OperatorMode::RandomSym, 5)));
}

TEST_CASE("binary container round trip preserves evaluation bitwise") {
  const DenseMatrix x = randn(20, 2, 31);
  auto roundtrip = [&](const ObjectiveModel& m) {
    std::stringstream buf;
    save_problem(m, buf);
    const auto loaded = load_problem(buf);
    REQUIRE(loaded->n() == m.n());
    REQUIRE(loaded->p() == m.p());
    REQUIRE(loaded->kind() == m.kind());
    CHECK(loaded->curvature_scale() == m.curvature_scale());
    const Evaluation a = m.evaluate(x);
    const Evaluation b = loaded->evaluate(x);
    CHECK(a.value == b.value);
    CHECK(oracles::bits_equal(a.gradient, b.gradient));
  };
  roundtrip(*gen_problem1(20, 2, 1.0, OperatorMode::RandomSym, 32));
  roundtrip(*gen_problem2(20, 2, 1.0, 1.01, 1.01, 1.0, 33));
  roundtrip(*gen_problem3(20, 2, 1.01, 1.0, 34));
  roundtrip(*gen_problem4(20, 2, 35));
  roundtrip(*gen_problem6(20, 2, OperatorMode::RandomSym, 36));

  std::stringstream bad("not a container");
  CHECK_THROWS_AS(load_problem(bad), io_error);
}

TEST_CASE("dimension preconditions") {
  CHECK_THROWS_AS(gen_problem2(10, 6, 1.0, 1.01, 1.01, 1.0, 1), parameter_error);
  CHECK_THROWS_AS(gen_problem2(10, 3, 1.0, 0.5, 1.01, 1.0, 1), parameter_error);
  CHECK_THROWS_AS(gen_problem1(10, 6, 1.0, OperatorMode::RandomSym, 1), parameter_error);
}

TEST_SUITE_END();
