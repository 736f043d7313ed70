#pragma once

// Dense symmetric eigendecomposition via cyclic Jacobi sweeps.
//
// Jacobi is slower than tridiagonalization+QL but is simple, exceptionally
// accurate on symmetric matrices, and fully deterministic: fixed sweep order,
// fixed rotation formulas, and a fixed eigenvector sign convention make
// repeated runs bit-identical within a build.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lielpp/errors.hpp"
#include "lielpp/matrix.hpp"

namespace lielpp {

struct SymEigen {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
  return std::sqrt(2.0 * s);
}

// Fix each column's sign: the first entry of largest magnitude is positive.
inline void fix_eigenvector_signs(Matrix& v) {
  const std::size_t n = v.rows();
  for (std::size_t c = 0; c < v.cols(); ++c) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double mag = std::abs(v(r, c));
      if (mag > best) {
        best = mag;
        arg = r;
      }
    }
    if (v(arg, c) < 0.0)
      for (std::size_t r = 0; r < n; ++r) v(r, c) = -v(r, c);
  }
}

}  // namespace detail

inline SymEigen sym_eigen(const Matrix& m) {
  if (!m.is_square()) throw InvalidInput("sym_eigen: matrix must be square");
  if (!m.is_finite()) throw InvalidInput("sym_eigen: non-finite entries");
  if (!is_symmetric_within(m, 1e-9))
    throw InvalidInput("sym_eigen: matrix is not symmetric within 1e-9 relative tolerance");

  const std::size_t n = m.rows();
  Matrix a = symmetrized(m);
  Matrix v = Matrix::identity(n);
  const double norm = a.frobenius_norm();
  const double tol = 1e-14 * norm;

  if (norm > 0.0) {
    // Threshold rule: rotate while any |a_pq| exceeds a bound relative to its
    // own diagonal pair. This keeps small eigenvalues accurate relative to
    // their own scale (not just to ||M||), which matters when the matrix has
    // a large dynamic range. At termination the remaining off-diagonal
    // Frobenius mass is bounded by (1e-15/n) * sum|a_ii| <= 1e-14 * ||M||_F.
    constexpr int kMaxSweeps = 100;
    const double rel = 1e-15 / static_cast<double>(n);
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
      bool rotated = false;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          const double threshold = rel * std::sqrt(std::abs(a(p, p)) * std::abs(a(q, q)));
          if (std::abs(apq) <= threshold || std::abs(apq) <= 1e-300) continue;
          rotated = true;
          const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
          double t;
          if (std::abs(theta) > 1e10) {
            t = 1.0 / (2.0 * theta);
          } else {
            t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            if (theta < 0.0) t = -t;
          }
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          const double tau = s / (1.0 + c);

          a(p, p) -= t * apq;
          a(q, q) += t * apq;
          a(p, q) = a(q, p) = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (i == p || i == q) continue;
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = a(p, i) = aip - s * (aiq + tau * aip);
            a(i, q) = a(q, i) = aiq + s * (aip - tau * aiq);
          }
          for (std::size_t i = 0; i < n; ++i) {
            const double vip = v(i, p);
            const double viq = v(i, q);
            v(i, p) = vip - s * (viq + tau * vip);
            v(i, q) = viq + s * (vip - tau * viq);
          }
        }
      }
      if (!rotated) break;
    }
    if (sweep == kMaxSweeps && detail::off_diagonal_norm(a) > tol)
      throw Error("sym_eigen: Jacobi sweeps failed to converge");
  }

  // Sort ascending; stable in the original index for reproducible tie order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  detail::fix_eigenvector_signs(out.eigenvectors);
  return out;
}

}  // namespace lielpp
