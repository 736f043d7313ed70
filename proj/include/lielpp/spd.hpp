#pragma once

// The SPD matrix Lie group under the group operation
//   S1 (.) S2 = exp(log(S1) + log(S2)),
// with the Log-Euclidean metric: geodesic distance is the Frobenius distance
// between matrix logarithms, exp/log maps at a base point go through the
// Frechet derivatives of exp/log, and the space is flat.

#include <cmath>
#include <string>
#include <utility>

#include "lielpp/errors.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/matrix_functions.hpp"
#include "lielpp/sym_eigen.hpp"

namespace lielpp {

// A symmetric matrix: a tangent-space / Lie-algebra element.
class SymMatrix {
public:
  explicit SymMatrix(const Matrix& m) {
    if (!m.is_square()) throw InvalidInput("SymMatrix: matrix must be square");
    if (!m.is_finite()) throw InvalidInput("SymMatrix: non-finite entries");
    if (!is_symmetric_within(m, 1e-9))
      throw InvalidInput("SymMatrix: not symmetric within 1e-9 relative tolerance");
    entries_ = symmetrized(m);
  }

  std::size_t dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }
  double frobenius_norm() const { return entries_.frobenius_norm(); }

  SymMatrix& operator+=(const SymMatrix& o) {
    entries_ += o.entries_;
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    entries_ -= o.entries_;
    return *this;
  }
  SymMatrix& operator*=(double s) {
    entries_ *= s;
    return *this;
  }

private:
  Matrix entries_;
};

inline SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
inline SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
inline SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
inline SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

enum class SpdMode { Strict, Clamp };

namespace detail {

// Positive-definiteness floor, relative to the matrix's own scale. Falls back
// to an absolute floor when the trace is nonpositive (a zero covariance still
// has to clamp to something positive).
inline double pd_floor(double trace, std::size_t dim) {
  double scale = trace / static_cast<double>(dim);
  if (!(scale > 0.0)) scale = 1.0;
  return 1e-12 * scale;
}

}  // namespace detail

// A validated SPD matrix with its eigendecomposition. Immutable; the
// decomposition is computed once at construction (validation needs it anyway)
// and shared by every operation, so values are safe to use across threads.
class SpdMatrix {
public:
  std::size_t dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  const SymEigen& eig() const { return eig_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }

  friend SpdMatrix make_spd(const Matrix& m, SpdMode mode);
  friend SpdMatrix exp_sym(const SymMatrix& x);

private:
  SpdMatrix(Matrix entries, SymEigen eig)
      : entries_(std::move(entries)), eig_(std::move(eig)) {}

  static SpdMatrix checked(Matrix entries, SymEigen eig) {
    const double tol = detail::pd_floor(entries.trace(), entries.rows());
    const double lmin = eig.eigenvalues.front();
    if (!(lmin > tol))
      throw NotPositiveDefinite("SpdMatrix: smallest eigenvalue " + std::to_string(lmin) +
                                    " does not exceed the positive-definiteness floor " +
                                    std::to_string(tol),
                                lmin);
    return SpdMatrix(std::move(entries), std::move(eig));
  }

  Matrix entries_;
  SymEigen eig_;
};

inline SpdMatrix make_spd(const Matrix& m, SpdMode mode) {
  if (!m.is_square()) throw InvalidInput("make_spd: matrix must be square");
  if (!m.is_finite()) throw InvalidInput("make_spd: non-finite entries");

  if (mode == SpdMode::Strict) {
    if (!is_symmetric_within(m, 1e-9))
      throw InvalidInput("make_spd: not symmetric within 1e-9 relative tolerance");
    Matrix sym = symmetrized(m);
    SymEigen eig = sym_eigen(sym);
    return SpdMatrix::checked(std::move(sym), std::move(eig));
  }

  // Clamp: symmetrize and lift eigenvalues below the floor up to the floor.
  Matrix sym = symmetrized(m);
  SymEigen eig = sym_eigen(sym);
  const double tol = detail::pd_floor(sym.trace(), sym.rows());
  const std::size_t n = sym.rows();
  bool lifted = false;
  for (double& l : eig.eigenvalues)
    if (l < tol) {
      l = tol;
      lifted = true;
    }
  if (!lifted) return SpdMatrix(std::move(sym), std::move(eig));

  const Matrix& v = eig.eigenvectors;
  Matrix rebuilt(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(r, k) * eig.eigenvalues[k] * v(c, k);
      rebuilt(r, c) = rebuilt(c, r) = s;
    }
  return SpdMatrix(std::move(rebuilt), std::move(eig));
}

inline SymMatrix log_spd(const SpdMatrix& s) {
  return SymMatrix(detail::spectral_apply(
      s.eig(), [](double l) { return std::log(l); }, "log_spd"));
}

inline SpdMatrix exp_sym(const SymMatrix& x) {
  SymEigen eig = sym_eigen(x.entries());
  const std::size_t n = x.dim();
  for (double& l : eig.eigenvalues) {
    l = std::exp(l);
    if (!std::isfinite(l))
      throw DomainError("exp_sym: exponential overflow", eig.eigenvalues.back());
  }
  const Matrix& v = eig.eigenvectors;
  Matrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(r, k) * eig.eigenvalues[k] * v(c, k);
      out(r, c) = out(c, r) = s;
    }
  return SpdMatrix::checked(std::move(out), std::move(eig));
}

// Group operation: exp(log S1 + log S2). Commutative, identity I.
inline SpdMatrix group_op(const SpdMatrix& s1, const SpdMatrix& s2) {
  if (s1.dim() != s2.dim()) throw InvalidInput("group_op: dimension mismatch");
  return exp_sym(log_spd(s1) + log_spd(s2));
}

inline SpdMatrix group_inverse(const SpdMatrix& s) { return exp_sym(-1.0 * log_spd(s)); }

// Log-Euclidean geodesic distance ||log S1 - log S2||_F.
inline double lem_distance(const SpdMatrix& s1, const SpdMatrix& s2) {
  if (s1.dim() != s2.dim()) throw InvalidInput("lem_distance: dimension mismatch");
  return frobenius_distance(log_spd(s1).entries(), log_spd(s2).entries());
}

inline double lem_squared_distance(const SpdMatrix& s1, const SpdMatrix& s2) {
  const double d = lem_distance(s1, s2);
  return d * d;
}

// Frechet derivatives at SPD base points, reusing the cached decomposition.
inline SymMatrix frechet_log(const SpdMatrix& s, const SymMatrix& t) {
  if (s.dim() != t.dim()) throw InvalidInput("frechet_log: dimension mismatch");
  return SymMatrix(detail::loewner_apply(
      s.eig(), t.entries(), [](double x) { return std::log(x); },
      [](double x) { return 1.0 / x; }));
}

inline SymMatrix frechet_exp(const SymMatrix& x, const SymMatrix& t) {
  return SymMatrix(frechet_exp(x.entries(), t.entries()));
}

// Exponential map at S1: exp(log S1 + D log(S1)[T]).
inline SpdMatrix exp_at(const SpdMatrix& s1, const SymMatrix& t) {
  if (s1.dim() != t.dim()) throw InvalidInput("exp_at: dimension mismatch");
  return exp_sym(log_spd(s1) + frechet_log(s1, t));
}

// Logarithm map at S1: D exp(log S1)[log S2 - log S1].
inline SymMatrix log_at(const SpdMatrix& s1, const SpdMatrix& s2) {
  if (s1.dim() != s2.dim()) throw InvalidInput("log_at: dimension mismatch");
  const SymMatrix l1 = log_spd(s1);
  return frechet_exp(l1, log_spd(s2) - l1);
}

// First-order difference on the group: Sx^(1/2) (log Sxu - log Sx) Sx^(1/2).
inline SymMatrix spd_first_difference(const SpdMatrix& sx, const SpdMatrix& sxu) {
  if (sx.dim() != sxu.dim()) throw InvalidInput("spd_first_difference: dimension mismatch");
  const Matrix root = detail::spectral_apply(
      sx.eig(), [](double l) { return std::sqrt(l); }, "spd_first_difference");
  const Matrix diff = log_spd(sxu).entries() - log_spd(sx).entries();
  return SymMatrix(symmetrized(root * diff * root));
}

// Discrete Laplace-Beltrami step: sum of the forward and backward first
// differences around S0 (the second-order terms cancel to O(||u||^4)).
inline SymMatrix spd_laplace_beltrami(const SpdMatrix& sm, const SpdMatrix& s0,
                                      const SpdMatrix& sp) {
  if (sm.dim() != s0.dim() || sp.dim() != s0.dim())
    throw InvalidInput("spd_laplace_beltrami: dimension mismatch");
  return spd_first_difference(s0, sp) + spd_first_difference(s0, sm);
}

}  // namespace lielpp
