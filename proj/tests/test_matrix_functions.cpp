#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lielpp/matrix.hpp"
#include "lielpp/matrix_functions.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/spd.hpp"
#include "support.hpp"

using namespace lielpp;
using testsupport::diag;
using testsupport::random_spd;
using testsupport::random_symmetric;
using testsupport::rel_diff;

namespace {

// Central finite difference of a spectral function: the independent oracle
// for the Loewner-matrix derivatives.
Matrix central_difference(const Matrix& base, const Matrix& dir,
                          const std::function<double(double)>& f, double h) {
  const Matrix plus = sym_func(base + h * dir, f);
  const Matrix minus = sym_func(base - 1.0 * h * dir, f);
  return (plus - minus) * (1.0 / (2.0 * h));
}

}  // namespace

TEST_CASE("sym_func basics") {
  const auto log_fn = [](double x) { return std::log(x); };

  REQUIRE(sym_func(Matrix::identity(3), log_fn).frobenius_norm() < 1e-14);

  const Matrix d = sym_func(diag({std::exp(2.0), std::exp(1.0)}), log_fn);
  REQUIRE(d(0, 0) == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(d(1, 1) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(std::abs(d(0, 1)) < 1e-13);

  // log([[2,1],[1,2]]) = (ln 3 / 2) * ones, from eigenvalues {3, 1}.
  Matrix m(2, 2);
  m(0, 0) = m(1, 1) = 2.0;
  m(0, 1) = m(1, 0) = 1.0;
  const Matrix lg = sym_func(m, log_fn);
  const double half_ln3 = 0.5 * std::log(3.0);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      REQUIRE(lg(r, c) == Catch::Approx(half_ln3).margin(1e-12));
}

TEST_CASE("sym_func reports the offending eigenvalue") {
  const auto log_fn = [](double x) { return std::log(x); };
  try {
    sym_func(diag({1.0, 0.0}), log_fn);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    REQUIRE(std::abs(e.offending_value) < 1e-12);
  }
  REQUIRE_THROWS_AS(sym_func(diag({1.0, -1.0}), log_fn), DomainError);
}

TEST_CASE("sym_func exp/log round trip") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_symmetric(rng, 2 + rng.integer(7), 0.8);
    const Matrix back = sym_func(sym_func(m, [](double x) { return std::exp(x); }),
                                 [](double x) { return std::log(x); });
    REQUIRE(frobenius_distance(back, symmetrized(m)) <= 1e-9 * (1.0 + m.frobenius_norm()));
  }
}

TEST_CASE("frechet_log trivial directions") {
  Rng rng(7);
  const SpdMatrix s = random_spd(rng, 4);

  // Commuting direction: D log(S)[S] = S^-1 S = I.
  const Matrix along_self = frechet_log(s.entries(), s.entries());
  REQUIRE(frobenius_distance(along_self, Matrix::identity(4)) < 1e-10);

  // At the identity the derivative is the identity map.
  const Matrix t = random_symmetric(rng, 4);
  REQUIRE(rel_diff(frechet_log(Matrix::identity(4), t), symmetrized(t)) < 1e-12);

  REQUIRE_THROWS_AS(frechet_log(diag({1.0, -1.0}), random_symmetric(rng, 2)), DomainError);
}

TEST_CASE("frechet_exp trivial directions") {
  Rng rng(8);
  const Matrix t = random_symmetric(rng, 4);
  REQUIRE(rel_diff(frechet_exp(Matrix(4, 4), t), symmetrized(t)) < 1e-12);

  // Commuting direction: D exp(X)[X] = exp(X) X.
  const Matrix x = random_symmetric(rng, 4, 0.6);
  const Matrix expected = sym_func(x, [](double v) { return std::exp(v); }) * symmetrized(x);
  REQUIRE(rel_diff(frechet_exp(x, x), symmetrized(expected)) < 1e-10);
}

TEST_CASE("frechet derivatives match central finite differences") {
  Rng rng(99);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const SpdMatrix s = random_spd(rng, 5, 0.5);
    const Matrix t = random_symmetric(rng, 5);

    const Matrix dlog = frechet_log(s.entries(), t);
    const Matrix fd_log =
        central_difference(s.entries(), symmetrized(t), [](double x) { return std::log(x); }, h);
    REQUIRE(frobenius_distance(dlog, fd_log) <= 1e-6 * dlog.frobenius_norm());

    const Matrix x = random_symmetric(rng, 5, 0.6);
    const Matrix dexp = frechet_exp(x, t);
    const Matrix fd_exp =
        central_difference(x, symmetrized(t), [](double v) { return std::exp(v); }, h);
    REQUIRE(frobenius_distance(dexp, fd_exp) <= 1e-6 * dexp.frobenius_norm());
  }
}

TEST_CASE("frechet_log is linear in the direction") {
  Rng rng(3);
  const SpdMatrix s = random_spd(rng, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix t1 = random_symmetric(rng, 5);
    const Matrix t2 = random_symmetric(rng, 5);
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    const Matrix combined = frechet_log(s.entries(), a * t1 + b * t2);
    const Matrix separate = a * frechet_log(s.entries(), t1) + b * frechet_log(s.entries(), t2);
    REQUIRE(frobenius_distance(combined, separate) <= 1e-10 * (1.0 + combined.frobenius_norm()));
  }
}

TEST_CASE("chain rule: frechet_exp inverts frechet_log") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const SpdMatrix s = random_spd(rng, 5);
    const Matrix t = random_symmetric(rng, 5);
    const Matrix log_s = sym_func(s.entries(), [](double x) { return std::log(x); });
    const Matrix back = frechet_exp(log_s, frechet_log(s.entries(), t));
    REQUIRE(frobenius_distance(back, symmetrized(t)) <= 1e-8 * (1.0 + t.frobenius_norm()));
  }
}
