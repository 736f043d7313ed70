#pragma once

// Generalized symmetric-definite eigensolver for pencils (M, B) with M, B
// symmetric PSD. B is ridge-regularized to B_reg = B + eps*(tr(B)/D)*I and
// the problem is reduced to a standard one through the Cholesky factor of
// B_reg:  M a = l B_reg a  <=>  (L^-1 M L^-T) u = l u,  a = L^-T u.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lielpp/errors.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/sym_eigen.hpp"

namespace lielpp {

struct GenEigenResult {
  std::vector<double> eigenvalues;  // d smallest, ascending
  Matrix basis;                     // D x d, B_reg-orthonormal columns
  double regularization_applied;    // the eps actually used
};

namespace detail {

inline Matrix cholesky_lower(const Matrix& b) {
  const std::size_t n = b.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = b(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0))
      throw DegenerateInput("cholesky: pivot " + std::to_string(diag) + " at index " +
                            std::to_string(j) + "; matrix is not positive definite");
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = b(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// X = L^-1 R (forward substitution, columnwise).
inline Matrix solve_lower(const Matrix& l, const Matrix& r) {
  const std::size_t n = l.rows();
  Matrix x(n, r.cols());
  for (std::size_t c = 0; c < r.cols(); ++c)
    for (std::size_t i = 0; i < n; ++i) {
      double s = r(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  return x;
}

// X = L^-T R (back substitution with the transposed lower factor).
inline Matrix solve_lower_transposed(const Matrix& l, const Matrix& r) {
  const std::size_t n = l.rows();
  Matrix x(n, r.cols());
  for (std::size_t c = 0; c < r.cols(); ++c)
    for (std::size_t ii = n; ii-- > 0;) {
      double s = r(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x(k, c);
      x(ii, c) = s / l(ii, ii);
    }
  return x;
}

// One modified Gram-Schmidt pass in the B inner product. The columns come
// out of the Cholesky reduction already near-orthonormal; this pass removes
// the O(cond(L)*eps) drift so the B-orthonormality invariant holds even for
// strongly regularized pencils.
inline void b_orthonormalize(Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  std::vector<double> bu(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t l = 0; l < j; ++l) {
      for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c) s += b(r, c) * a(c, l);
        bu[r] = s;
      }
      double proj = 0.0;
      for (std::size_t r = 0; r < n; ++r) proj += a(r, j) * bu[r];
      for (std::size_t r = 0; r < n; ++r) a(r, j) -= proj * a(r, l);
    }
    double quad = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += b(r, c) * a(c, j);
      quad += a(r, j) * s;
    }
    if (quad > 0.0) {
      const double inv = 1.0 / std::sqrt(quad);
      for (std::size_t r = 0; r < n; ++r) a(r, j) *= inv;
    }
  }
}

}  // namespace detail

// reg: explicit eps >= 0, or nullopt for auto (smallest power of ten >= 1e-12
// that brings cond(B_reg) down to 1e12).
inline GenEigenResult gen_eig_sym_def(const Matrix& m, const Matrix& b, std::size_t d,
                                      std::optional<double> reg = std::nullopt) {
  if (!m.is_square() || !b.is_square() || m.rows() != b.rows())
    throw InvalidInput("gen_eig_sym_def: M and B must be square with equal dimension");
  const std::size_t dim = m.rows();
  if (d < 1 || d > dim)
    throw InvalidInput("gen_eig_sym_def: d must satisfy 1 <= d <= D (d = " + std::to_string(d) +
                       ", D = " + std::to_string(dim) + ")");
  if (!m.is_finite() || !b.is_finite()) throw InvalidInput("gen_eig_sym_def: non-finite entries");
  if (!is_symmetric_within(m, 1e-9) || !is_symmetric_within(b, 1e-9))
    throw InvalidInput("gen_eig_sym_def: M and B must be symmetric");
  if (reg && *reg < 0.0) throw InvalidInput("gen_eig_sym_def: reg must be >= 0");

  const Matrix bs = symmetrized(b);
  const double mu = bs.trace() / static_cast<double>(dim);
  if (bs.frobenius_norm() == 0.0 || !(mu > 0.0))
    throw DegenerateInput("gen_eig_sym_def: B has no positive mass to regularize against");

  double eps;
  if (reg) {
    eps = *reg;
  } else {
    const SymEigen beig = sym_eigen(bs);
    const double lmin = std::max(beig.eigenvalues.front(), 0.0);
    const double lmax = std::max(beig.eigenvalues.back(), 0.0);
    eps = 1e-12;
    while (eps < 1e7) {
      const double lo = lmin + eps * mu;
      const double hi = lmax + eps * mu;
      if (lo > 0.0 && hi / lo <= 1e12) break;
      eps *= 10.0;
    }
    if (eps >= 1e7)
      throw DegenerateInput("gen_eig_sym_def: could not condition B by regularization");
  }

  Matrix b_reg = bs;
  for (std::size_t i = 0; i < dim; ++i) b_reg(i, i) += eps * mu;

  const Matrix l = detail::cholesky_lower(b_reg);
  const Matrix y = detail::solve_lower(l, symmetrized(m));
  const Matrix c = symmetrized(detail::solve_lower(l, y.transposed()).transposed());
  const SymEigen ceig = sym_eigen(c);

  Matrix u(dim, d);
  for (std::size_t cidx = 0; cidx < d; ++cidx)
    for (std::size_t r = 0; r < dim; ++r) u(r, cidx) = ceig.eigenvectors(r, cidx);

  GenEigenResult out;
  out.eigenvalues.assign(ceig.eigenvalues.begin(), ceig.eigenvalues.begin() + d);
  out.basis = detail::solve_lower_transposed(l, u);
  out.regularization_applied = eps;
  detail::b_orthonormalize(out.basis, b_reg);
  return out;
}

}  // namespace lielpp
