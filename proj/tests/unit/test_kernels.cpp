#include <doctest.h>

#include <cmath>

#include "orthopt/kernels.hpp"
#include "orthopt/rng.hpp"
#include "support/oracles.hpp"

using namespace orthopt;

namespace {

DenseMatrix randn(std::int64_t r, std::int64_t c, std::uint64_t seed) {
  Rng rng(seed);
  return random_normal(r, c, rng);
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("sym_part fixed points and definition") {
  CHECK(oracles::bits_equal(sym_part(DenseMatrix::identity(2)).matrix(),
                            DenseMatrix::identity(2)));

  DenseMatrix m(2, 2);
  m(0, 1) = 1.0;
  const SquareSymmetric s = sym_part(m);
  CHECK(s(0, 0) == 0.0);
  CHECK(s(0, 1) == 0.5);
  CHECK(s(1, 0) == 0.5);
  CHECK(s(1, 1) == 0.0);

  // A symmetric input is reproduced bitwise.
  const SquareSymmetric r = sym_part(randn(9, 9, 11));
  CHECK(oracles::bits_equal(sym_part(r.matrix()).matrix(), r.matrix()));

  // Linearity.
  const DenseMatrix a = randn(6, 6, 12);
  const DenseMatrix b = randn(6, 6, 13);
  const DenseMatrix sum_first = sym_part(add_scaled(a, 2.0, b)).matrix();
  const DenseMatrix sym_first =
      add_scaled(sym_part(a).matrix(), 2.0, sym_part(b).matrix());
  CHECK(frobenius_norm(add_scaled(sum_first, -1.0, sym_first)) <=
        1e-15 * (1.0 + frobenius_norm(sum_first)));

  CHECK_THROWS_AS(sym_part(DenseMatrix(2, 3)), dimension_error);
}

TEST_CASE("diag_part definition and idempotence") {
  DenseMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(1, 0) = 3.0;
  m(1, 1) = 4.0;
  const DenseMatrix d = diag_part(m);
  CHECK(d(0, 0) == 1.0);
  CHECK(d(0, 1) == 0.0);
  CHECK(d(1, 0) == 0.0);
  CHECK(d(1, 1) == 4.0);

  CHECK(oracles::bits_equal(diag_part(DenseMatrix::identity(5)), DenseMatrix::identity(5)));
  CHECK(oracles::bits_equal(diag_part(d), d));

  // Phi(Psi(M)) == Phi(M) for any square M.
  const DenseMatrix a = randn(7, 7, 3);
  CHECK(oracles::bits_equal(diag_part(sym_part(a).matrix()), diag_part(a)));

  CHECK_THROWS_AS(diag_part(DenseMatrix(3, 2)), dimension_error);
}

TEST_CASE("matmul arithmetic, identity, and bitwise thread invariance") {
  DenseMatrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 3;
  a(1, 1) = 4;
  DenseMatrix b(2, 1);
  b(0, 0) = 5;
  b(1, 0) = 6;
  const DenseMatrix c = matmul(a, b);
  CHECK(c(0, 0) == 17.0);
  CHECK(c(1, 0) == 39.0);

  const DenseMatrix r = randn(13, 9, 21);
  CHECK(oracles::bits_equal(matmul(r, DenseMatrix::identity(9)), r));

  const DenseMatrix x = randn(64, 32, 5);
  const DenseMatrix y = randn(32, 16, 6);
  const DenseMatrix ref = oracles::matmul_ref(x, y);
  for (int threads : {1, 2, 4}) {
    const DenseMatrix got = matmul(x, y, threads);
    CHECK(oracles::bits_equal(got, ref));
  }

  CHECK_THROWS_AS(matmul(DenseMatrix(2, 3), DenseMatrix(2, 3)), dimension_error);
}

TEST_CASE("matmul associativity against oracle") {
  Rng rng(99);
  for (int rep = 0; rep < 4; ++rep) {
    const std::int64_t n1 = 5 + static_cast<std::int64_t>(rng.next_u64() % 60);
    const std::int64_t n2 = 5 + static_cast<std::int64_t>(rng.next_u64() % 60);
    const std::int64_t n3 = 5 + static_cast<std::int64_t>(rng.next_u64() % 60);
    const std::int64_t n4 = 5 + static_cast<std::int64_t>(rng.next_u64() % 60);
    const DenseMatrix a = random_normal(n1, n2, rng);
    const DenseMatrix b = random_normal(n2, n3, rng);
    const DenseMatrix c = random_normal(n3, n4, rng);
    const DenseMatrix left = matmul(matmul(a, b, 2), c, 2);
    const DenseMatrix right = matmul(a, matmul(b, c, 2), 2);
    const double scale = frobenius_norm(left);
    CHECK(frobenius_norm(add_scaled(left, -1.0, right)) <= 1e-12 * (1.0 + scale));
  }
}

TEST_CASE("matmul_at_b equals transpose-then-multiply oracle") {
  const DenseMatrix a = randn(40, 7, 31);
  const DenseMatrix b = randn(40, 5, 32);
  const DenseMatrix ref = oracles::matmul_ref(oracles::transpose_ref(a), b);
  for (int threads : {1, 3}) {
    CHECK(oracles::bits_equal(matmul_at_b(a, b, threads), ref));
  }
}

TEST_CASE("gram examples and scalar-loop oracle") {
  const DenseMatrix q = orthonormalize(randn(30, 6, 77));
  DenseMatrix gi = gram(q).matrix();
  add_scaled_identity_in_place(gi, -1.0);
  CHECK(frobenius_norm(gi) <= 1e-14 * 6);

  DenseMatrix e11(3, 2);
  e11(0, 0) = 1.0;
  e11(0, 1) = 1.0;
  const SquareSymmetric g2 = gram(e11);
  CHECK(g2(0, 0) == 1.0);
  CHECK(g2(0, 1) == 1.0);
  CHECK(g2(1, 0) == 1.0);
  CHECK(g2(1, 1) == 1.0);

  const DenseMatrix x = randn(50, 7, 42);
  const DenseMatrix ref = oracles::matmul_ref(oracles::transpose_ref(x), x);
  const SquareSymmetric g = gram(x, 2);
  for (std::int64_t j = 0; j < 7; ++j)
    for (std::int64_t i = 0; i < 7; ++i) {
      CHECK(g(i, j) == doctest::Approx(ref(i, j)).epsilon(1e-13));
      CHECK(g(i, j) == g(j, i));  // exact symmetry by construction
    }
}

TEST_CASE("orthonormalize: fixed point, column scaling, factor, rank error") {
  const DenseMatrix q0 = orthonormalize(randn(25, 5, 8));
  const DenseMatrix q1 = orthonormalize(q0);
  for (std::int64_t j = 0; j < 5; ++j)
    for (std::int64_t i = 0; i < 25; ++i)
      CHECK(q1(i, j) == doctest::Approx(q0(i, j)).epsilon(1e-13));

  DenseMatrix scaled(3, 2);
  scaled(0, 0) = 2.0;
  scaled(1, 1) = 3.0;
  const DenseMatrix qs = orthonormalize(scaled);
  CHECK(qs(0, 0) == doctest::Approx(1.0));
  CHECK(qs(1, 1) == doctest::Approx(1.0));
  CHECK(qs(2, 0) == doctest::Approx(0.0));
  CHECK(qs(2, 1) == doctest::Approx(0.0));

  const DenseMatrix x = randn(100, 10, 17);
  const OrthFactor f = orthonormalize_with_r(x);
  DenseMatrix qq = gram(f.q).matrix();
  add_scaled_identity_in_place(qq, -1.0);
  CHECK(frobenius_norm(qq) <= 1e-12);
  for (std::int64_t j = 0; j < 10; ++j)
    for (std::int64_t i = j + 1; i < 10; ++i) CHECK(f.r(i, j) == 0.0);
  const DenseMatrix residual = add_scaled(x, -1.0, matmul(f.q, f.r));
  CHECK(frobenius_norm(residual) <= 1e-12 * frobenius_norm(x));

  DenseMatrix rank1(20, 3);
  const DenseMatrix col = randn(20, 1, 5);
  for (std::int64_t j = 0; j < 3; ++j)
    for (std::int64_t i = 0; i < 20; ++i) rank1(i, j) = col(i, 0);
  CHECK_THROWS_AS(orthonormalize(rank1), rank_error);
}

TEST_CASE("gram of orthonormalized stays tight up to condition 1e6") {
  // X = Q1 D V with singular values spanning six decades.
  const DenseMatrix q1 = orthonormalize(randn(100, 10, 301));
  const DenseMatrix v = orthonormalize(randn(10, 10, 302));
  std::vector<double> d(10);
  for (int i = 0; i < 10; ++i) d[static_cast<std::size_t>(i)] = std::pow(10.0, -6.0 * i / 9.0);
  DenseMatrix q1d = q1;
  scale_cols_in_place(q1d, d);
  const DenseMatrix x = matmul(q1d, oracles::transpose_ref(v));
  DenseMatrix qq = gram(orthonormalize(x)).matrix();
  add_scaled_identity_in_place(qq, -1.0);
  CHECK(frobenius_norm(qq) <= 1e-12);
}

TEST_CASE("spectral_norm_estimate on known spectra and Jacobi oracle") {
  SquareSymmetric d(3);
  d.set_mirrored(0, 0, 1.0);
  d.set_mirrored(1, 1, 2.0);
  d.set_mirrored(2, 2, 3.0);
  CHECK(spectral_norm_estimate(d, 1) == doctest::Approx(3.0).epsilon(1e-5));

  CHECK(spectral_norm_estimate(SquareSymmetric::identity(40), 2) ==
        doctest::Approx(1.0).epsilon(1e-6));

  CHECK(spectral_norm_estimate(SquareSymmetric(6), 3) == 0.0);

  const SquareSymmetric a = sym_part(randn(30, 30, 55));
  const auto ev = oracles::jacobi_eigenvalues(a.matrix());
  const double truth = std::max(std::abs(ev.front()), std::abs(ev.back()));
  CHECK(spectral_norm_estimate(a, 4) == doctest::Approx(truth).epsilon(1e-4));
}

TEST_CASE("row_sq_norms examples and full-product oracle") {
  DenseMatrix x(2, 2);
  x(0, 0) = 1;
  x(0, 1) = 2;
  x(1, 0) = 3;
  x(1, 1) = 4;
  const auto r = row_sq_norms(x);
  CHECK(r[0] == 5.0);
  CHECK(r[1] == 25.0);

  DenseMatrix eye_block(6, 2);
  eye_block(0, 0) = 1.0;
  eye_block(1, 1) = 1.0;
  const auto rb = row_sq_norms(eye_block);
  CHECK(rb[0] == 1.0);
  CHECK(rb[1] == 1.0);
  for (int i = 2; i < 6; ++i) CHECK(rb[static_cast<std::size_t>(i)] == 0.0);

  const DenseMatrix y = randn(40, 6, 91);
  const DenseMatrix yyt = oracles::matmul_ref(y, oracles::transpose_ref(y));
  const auto rr = row_sq_norms(y);
  for (std::int64_t i = 0; i < 40; ++i)
    CHECK(rr[static_cast<std::size_t>(i)] ==
          doctest::Approx(yyt(i, i)).epsilon(1e-13));
}

TEST_CASE("frobenius_inner examples and exact oracle match") {
  CHECK(frobenius_inner(DenseMatrix::identity(2), DenseMatrix::identity(2)) == 2.0);
  const DenseMatrix a = randn(9, 4, 13);
  CHECK(frobenius_inner(a, DenseMatrix(9, 4)) == 0.0);
  const DenseMatrix b = randn(9, 4, 14);
  CHECK(frobenius_inner(a, b) == oracles::fro_inner_ref(a, b));
  CHECK_THROWS_AS(frobenius_inner(a, DenseMatrix(4, 9)), dimension_error);
}

TEST_CASE("kernel determinism across thread counts") {
  Rng rng(2024);
  for (int rep = 0; rep < 3; ++rep) {
    const std::int64_t n = 20 + static_cast<std::int64_t>(rng.next_u64() % 80);
    const std::int64_t p = 3 + static_cast<std::int64_t>(rng.next_u64() % 12);
    const DenseMatrix x = random_normal(n, p, rng);
    const DenseMatrix m = random_normal(p, p, rng);
    const DenseMatrix ref_mm = matmul(x, m, 1);
    const DenseMatrix ref_at = matmul_at_b(x, x, 1);
    const DenseMatrix ref_gram = gram(x, 1).matrix();
    for (int threads = 2; threads <= 5; ++threads) {
      CHECK(oracles::bits_equal(matmul(x, m, threads), ref_mm));
      CHECK(oracles::bits_equal(matmul_at_b(x, x, threads), ref_at));
      CHECK(oracles::bits_equal(gram(x, threads).matrix(), ref_gram));
    }
  }
}

TEST_SUITE_END();
