#pragma once

// Spectral matrix functions and their Frechet (directional) derivatives.
//
// sym_func computes f(M) = V f(L) V^T from the eigendecomposition. The
// derivatives use the Daleckii-Krein formula: in the eigenbasis of the base
// point, the derivative acts entrywise through the Loewner matrix of divided
// differences K_ij = (f(l_i) - f(l_j)) / (l_i - l_j), with the confluent
// entries replaced by f' to avoid catastrophic cancellation.

#include <cmath>
#include <functional>
#include <string>

#include "lielpp/errors.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/sym_eigen.hpp"

namespace lielpp {

namespace detail {

// V f(L) V^T, symmetrized after assembly; f must be finite at every eigenvalue.
template <class F>
Matrix spectral_apply(const SymEigen& eig, F&& f, const char* op_name) {
  const std::size_t n = eig.eigenvalues.size();
  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    fv[i] = f(eig.eigenvalues[i]);
    if (!std::isfinite(fv[i]))
      throw DomainError(std::string(op_name) + ": function undefined at eigenvalue " +
                            std::to_string(eig.eigenvalues[i]),
                        eig.eigenvalues[i]);
  }
  const Matrix& v = eig.eigenvectors;
  Matrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(r, k) * fv[k] * v(c, k);
      out(r, c) = out(c, r) = s;
    }
  return out;
}

// Entrywise Loewner multiply in the eigenbasis of the base point:
//   Df(M)[T] = V (K o (V^T T V)) V^T.
// |l_i - l_j| <= 1e-12 * max(|l_i|, |l_j|, 1) counts as confluent; the entry
// is then the derivative limit evaluated at the midpoint (symmetric in i,j).
template <class F, class DF>
Matrix loewner_apply(const SymEigen& eig, const Matrix& t, F&& f, DF&& df) {
  const std::size_t n = eig.eigenvalues.size();
  const Matrix& v = eig.eigenvectors;
  const Matrix w = v.transposed() * t * v;
  Matrix kw(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double li = eig.eigenvalues[i];
      const double lj = eig.eigenvalues[j];
      const double gap = std::abs(li - lj);
      double k;
      if (gap <= 1e-12 * std::max({std::abs(li), std::abs(lj), 1.0}))
        k = df(0.5 * (li + lj));
      else
        k = (f(li) - f(lj)) / (li - lj);
      kw(i, j) = k * w(i, j);
    }
  return symmetrized(v * kw * v.transposed());
}

}  // namespace detail

// f applied to a symmetric matrix through its spectrum.
inline Matrix sym_func(const Matrix& m, const std::function<double(double)>& f) {
  return detail::spectral_apply(sym_eigen(m), f, "sym_func");
}

// Directional derivative of the matrix logarithm at SPD S along symmetric T.
inline Matrix frechet_log(const Matrix& s, const Matrix& t) {
  if (!t.is_square() || t.rows() != s.rows())
    throw InvalidInput("frechet_log: dimension mismatch");
  if (!t.is_finite()) throw InvalidInput("frechet_log: non-finite entries");
  if (!is_symmetric_within(t, 1e-9)) throw InvalidInput("frechet_log: direction not symmetric");
  const SymEigen eig = sym_eigen(s);
  if (eig.eigenvalues.front() <= 0.0)
    throw DomainError("frechet_log: base point not positive definite (lambda_min = " +
                          std::to_string(eig.eigenvalues.front()) + ")",
                      eig.eigenvalues.front());
  return detail::loewner_apply(
      eig, symmetrized(t), [](double x) { return std::log(x); },
      [](double x) { return 1.0 / x; });
}

// Directional derivative of the matrix exponential at symmetric X along T.
inline Matrix frechet_exp(const Matrix& x, const Matrix& t) {
  if (!t.is_square() || t.rows() != x.rows())
    throw InvalidInput("frechet_exp: dimension mismatch");
  if (!x.is_finite() || !t.is_finite()) throw InvalidInput("frechet_exp: non-finite entries");
  if (!is_symmetric_within(t, 1e-9)) throw InvalidInput("frechet_exp: direction not symmetric");
  const SymEigen eig = sym_eigen(x);
  Matrix out = detail::loewner_apply(
      eig, symmetrized(t), [](double v) { return std::exp(v); },
      [](double v) { return std::exp(v); });
  if (!out.is_finite())
    throw DomainError("frechet_exp: exponential overflow at eigenvalue " +
                          std::to_string(eig.eigenvalues.back()),
                      eig.eigenvalues.back());
  return out;
}

}  // namespace lielpp
