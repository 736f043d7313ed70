#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lielpp/matrix.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/sym_eigen.hpp"
#include "support.hpp"

using namespace lielpp;
using testsupport::diag;
using testsupport::random_symmetric;

TEST_CASE("sym_eigen identity") {
  const SymEigen e = sym_eigen(Matrix::identity(3));
  for (double l : e.eigenvalues) REQUIRE(l == Catch::Approx(1.0).margin(1e-14));
  const Matrix recon = e.eigenvectors * diag(e.eigenvalues) * e.eigenvectors.transposed();
  REQUIRE(frobenius_distance(recon, Matrix::identity(3)) < 1e-12);
}

TEST_CASE("sym_eigen 2x2 hand oracle") {
  // [[2,1],[1,2]]: characteristic polynomial (2-l)^2 - 1 gives l = 1, 3 with
  // eigenvectors (1,-1)/sqrt(2) and (1,1)/sqrt(2).
  Matrix m(2, 2);
  m(0, 0) = m(1, 1) = 2.0;
  m(0, 1) = m(1, 0) = 1.0;
  const SymEigen e = sym_eigen(m);
  REQUIRE(e.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(e.eigenvalues[1] == Catch::Approx(3.0).margin(1e-12));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  REQUIRE(e.eigenvectors(0, 0) == Catch::Approx(inv_sqrt2).margin(1e-12));
  REQUIRE(e.eigenvectors(1, 0) == Catch::Approx(-inv_sqrt2).margin(1e-12));
  REQUIRE(e.eigenvectors(0, 1) == Catch::Approx(inv_sqrt2).margin(1e-12));
  REQUIRE(e.eigenvectors(1, 1) == Catch::Approx(inv_sqrt2).margin(1e-12));
}

TEST_CASE("sym_eigen diagonal sorts ascending") {
  const SymEigen e = sym_eigen(diag({5.0, -2.0, 0.0}));
  REQUIRE(e.eigenvalues == std::vector<double>{-2.0, 0.0, 5.0});
}

TEST_CASE("sym_eigen rejects bad input") {
  Matrix nonsym(2, 2);
  nonsym(0, 1) = 1.0;
  REQUIRE_THROWS_AS(sym_eigen(nonsym), InvalidInput);

  Matrix nan(2, 2);
  nan(0, 0) = std::nan("");
  REQUIRE_THROWS_AS(sym_eigen(nan), InvalidInput);

  REQUIRE_THROWS_AS(sym_eigen(Matrix(2, 3)), InvalidInput);
}

TEST_CASE("sym_eigen reconstruction and orthogonality invariants") {
  Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.integer(9);
    const Matrix m = random_symmetric(rng, n, 2.0);
    const SymEigen e = sym_eigen(m);

    for (std::size_t i = 0; i + 1 < n; ++i) REQUIRE(e.eigenvalues[i] <= e.eigenvalues[i + 1]);

    const Matrix recon = e.eigenvectors * diag(e.eigenvalues) * e.eigenvectors.transposed();
    REQUIRE(frobenius_distance(recon, symmetrized(m)) <=
            1e-10 * std::max(1.0, m.frobenius_norm()));

    const Matrix vtv = e.eigenvectors.transposed() * e.eigenvectors;
    REQUIRE(frobenius_distance(vtv, Matrix::identity(n)) <= 1e-10);
  }
}

TEST_CASE("sym_eigen is deterministic") {
  Rng rng(77);
  const Matrix m = random_symmetric(rng, 8);
  const SymEigen a = sym_eigen(m);
  const SymEigen b = sym_eigen(m);
  REQUIRE(a.eigenvalues == b.eigenvalues);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      REQUIRE(a.eigenvectors(r, c) == b.eigenvectors(r, c));
}
