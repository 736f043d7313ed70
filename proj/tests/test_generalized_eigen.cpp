#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lielpp/generalized_eigen.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/sym_eigen.hpp"
#include "support.hpp"

using namespace lielpp;
using testsupport::diag;
using testsupport::random_psd;

namespace {

double pencil_residual(const Matrix& m, const Matrix& b_reg, const GenEigenResult& r) {
  double worst = 0.0;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < r.basis.cols(); ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double ma = 0.0, ba = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        ma += m(i, j) * r.basis(j, c);
        ba += b_reg(i, j) * r.basis(j, c);
      }
      const double res = ma - r.eigenvalues[c] * ba;
      acc += res * res;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

Matrix regularized(const Matrix& b, double eps) {
  Matrix b_reg = symmetrized(b);
  const double mu = b_reg.trace() / static_cast<double>(b_reg.rows());
  for (std::size_t i = 0; i < b_reg.rows(); ++i) b_reg(i, i) += eps * mu;
  return b_reg;
}

}  // namespace

TEST_CASE("gen_eig with B = I reduces to the standard problem") {
  Rng rng(5);
  const Matrix m = random_psd(rng, 6, 6);
  const GenEigenResult r = gen_eig_sym_def(m, Matrix::identity(6), 4, 0.0);
  const SymEigen e = sym_eigen(m);
  for (std::size_t i = 0; i < 4; ++i)
    REQUIRE(r.eigenvalues[i] == Catch::Approx(e.eigenvalues[i]).margin(1e-10));
  REQUIRE(r.regularization_applied == 0.0);
}

TEST_CASE("gen_eig with identical SPD pencil gives unit eigenvalues") {
  Rng rng(6);
  Matrix b = random_psd(rng, 5, 5);
  for (std::size_t i = 0; i < 5; ++i) b(i, i) += 1.0;  // make it safely PD
  const GenEigenResult r = gen_eig_sym_def(b, b, 3, 0.0);
  for (double l : r.eigenvalues) REQUIRE(l == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("gen_eig diagonal pencil solved entrywise") {
  // Ratios 3/1, 1/1, 2/2 -> the two smallest generalized eigenvalues are 1, 1.
  const GenEigenResult r = gen_eig_sym_def(diag({3.0, 1.0, 2.0}), diag({1.0, 1.0, 2.0}), 2, 0.0);
  REQUIRE(r.eigenvalues[0] == Catch::Approx(1.0).margin(1e-10));
  REQUIRE(r.eigenvalues[1] == Catch::Approx(1.0).margin(1e-10));

  const Matrix b = diag({1.0, 1.0, 2.0});
  const Matrix gram = r.basis.transposed() * b * r.basis;
  REQUIRE(frobenius_distance(gram, Matrix::identity(2)) < 1e-10);
}

TEST_CASE("gen_eig rejects degenerate and invalid input") {
  REQUIRE_THROWS_AS(gen_eig_sym_def(Matrix::identity(3), Matrix(3, 3), 1), DegenerateInput);
  REQUIRE_THROWS_AS(gen_eig_sym_def(Matrix::identity(3), Matrix::identity(3), 4), InvalidInput);
  REQUIRE_THROWS_AS(gen_eig_sym_def(Matrix::identity(3), Matrix::identity(3), 0), InvalidInput);
  REQUIRE_THROWS_AS(gen_eig_sym_def(Matrix::identity(3), Matrix::identity(4), 1), InvalidInput);
}

TEST_CASE("gen_eig residual and B-orthonormality on random PSD pencils") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.integer(7);
    const Matrix m = random_psd(rng, n, n);
    // Mix full-rank and rank-deficient B; auto regularization handles both.
    // d stays within rank(B): eigenpairs at the regularization floor have
    // B-normalized vectors so large that double rounding alone breaks the
    // residual scale (see the shared-nullspace test below for that regime).
    const std::size_t rank = 1 + rng.integer(n);
    const Matrix b = random_psd(rng, n, rank);
    const std::size_t d = 1 + rng.integer(rank);

    const GenEigenResult r = gen_eig_sym_def(m, b, d);
    const Matrix b_reg = regularized(b, r.regularization_applied);

    REQUIRE(pencil_residual(m, b_reg, r) <= 1e-8 * m.frobenius_norm());
    const Matrix gram = r.basis.transposed() * b_reg * r.basis;
    REQUIRE(frobenius_distance(gram, Matrix::identity(d)) <= 1e-10);

    for (std::size_t i = 0; i + 1 < d; ++i) REQUIRE(r.eigenvalues[i] <= r.eigenvalues[i + 1]);

    // Full column rank: smallest singular value via the Gram matrix of A.
    const SymEigen gram_a = sym_eigen(symmetrized(r.basis.transposed() * r.basis));
    REQUIRE(std::sqrt(std::max(gram_a.eigenvalues.front(), 0.0)) >
            1e-10 * std::sqrt(gram_a.eigenvalues.back()));
  }
}

TEST_CASE("gen_eig with a shared null space keeps floor modes at zero") {
  // Pencils built from the same row space (the shape the reducers produce):
  // null(B) is also null(M), so the regularization-floor eigenpairs carry
  // eigenvalue ~ 0 and the residual stays small even for huge basis columns.
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4 + rng.integer(4);
    const std::size_t rank = 1 + rng.integer(n - 2);
    Matrix g(rank, n);
    for (std::size_t r = 0; r < rank; ++r)
      for (std::size_t c = 0; c < n; ++c) g(r, c) = rng.gaussian();
    const Matrix m = symmetrized(g.transposed() * random_psd(rng, rank, rank) * g);
    const Matrix b = symmetrized(g.transposed() * random_psd(rng, rank, rank + 2) * g);

    const std::size_t d = n;  // include every floor mode
    const GenEigenResult r = gen_eig_sym_def(m, b, d);
    const Matrix b_reg = regularized(b, r.regularization_applied);
    REQUIRE(pencil_residual(m, b_reg, r) <= 1e-8 * m.frobenius_norm());
    for (std::size_t i = 0; i < n - rank; ++i)
      REQUIRE(std::abs(r.eigenvalues[i]) <= 1e-3 * (1.0 + m.frobenius_norm()));
  }
}

TEST_CASE("gen_eig is deterministic") {
  Rng rng(12);
  const Matrix m = random_psd(rng, 5, 5);
  const Matrix b = random_psd(rng, 5, 3);
  const GenEigenResult a = gen_eig_sym_def(m, b, 2);
  const GenEigenResult c = gen_eig_sym_def(m, b, 2);
  REQUIRE(a.eigenvalues == c.eigenvalues);
  REQUIRE(a.regularization_applied == c.regularization_applied);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t cc = 0; cc < 2; ++cc) REQUIRE(a.basis(r, cc) == c.basis(r, cc));
}
