#pragma once

// Executable checks for the theory behind the reducer: Laplacian dominance
// under entrywise weight dominance, the induced ordering of dimension
// reduction error sums, and the rank-one algebraic equivalence with vector
// LPP. Hypotheses are verified, never assumed; the entrywise dominance
// W >= W~ stands in for the feature-space inequality the theory relies on.

#include <algorithm>
#include <string>
#include <vector>

#include "lielpp/errors.hpp"
#include "lielpp/graph.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/sym_eigen.hpp"

namespace lielpp {

struct DominanceReport {
  double psd_margin = 0.0;         // lambda_min(L - L~)
  std::vector<double> eigen_gaps;  // lambda_i(L) - lambda_i(L~), by index
  bool holds = false;
};

struct ReductionErrorReport {
  double e_norm = 0.0;        // sum of the d smallest eigenvalues of L
  double e_tilde_norm = 0.0;  // same for L~
  bool holds = false;
};

struct RankOneReport {
  double max_residual = 0.0;
  bool holds = false;
};

namespace detail {

inline void require_dominance(const Matrix& w, const Matrix& w_tilde) {
  validate_weight_matrix(w, "laplacian_dominance_check (W)");
  validate_weight_matrix(w_tilde, "laplacian_dominance_check (W~)");
  if (w.rows() != w_tilde.rows())
    throw InvalidInput("laplacian_dominance_check: weight matrices must have equal size");
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = i + 1; j < w.cols(); ++j)
      if (w(i, j) < w_tilde(i, j))
        throw HypothesisNotMet("dominance hypothesis W >= W~ fails at (" + std::to_string(i) +
                                   "," + std::to_string(j) + "): " + std::to_string(w(i, j)) +
                                   " < " + std::to_string(w_tilde(i, j)),
                               i, j);
}

}  // namespace detail

// With W >= W~ entrywise, L - L~ is itself a Laplacian, hence PSD, and the
// sorted eigenvalues dominate indexwise. Reports both margins numerically.
inline DominanceReport laplacian_dominance_check(const Matrix& w, const Matrix& w_tilde) {
  detail::require_dominance(w, w_tilde);
  const Matrix l = laplacian_from_weights(w);
  const Matrix l_tilde = laplacian_from_weights(w_tilde);

  const SymEigen diff = sym_eigen(l - l_tilde);
  const SymEigen el = sym_eigen(l);
  const SymEigen elt = sym_eigen(l_tilde);

  DominanceReport rep;
  rep.psd_margin = diff.eigenvalues.front();
  rep.eigen_gaps.resize(el.eigenvalues.size());
  for (std::size_t i = 0; i < rep.eigen_gaps.size(); ++i)
    rep.eigen_gaps[i] = el.eigenvalues[i] - elt.eigenvalues[i];

  const double slack = 1e-9 * std::max(el.eigenvalues.back(), 0.0);
  rep.holds = rep.psd_margin >= -slack &&
              std::all_of(rep.eigen_gaps.begin(), rep.eigen_gaps.end(),
                          [slack](double g) { return g >= -slack; });
  return rep;
}

// Compare the dimension reduction error sums ||E|| = sum of the d smallest
// Laplacian eigenvalues for the two weight structures.
inline ReductionErrorReport reduction_error_compare(const Matrix& w, const Matrix& w_tilde,
                                                    std::size_t d) {
  detail::require_dominance(w, w_tilde);
  const std::size_t n = w.rows();
  if (d < 1 || d > n) throw InvalidInput("reduction_error_compare: need 1 <= d <= n");

  const SymEigen el = sym_eigen(laplacian_from_weights(w));
  const SymEigen elt = sym_eigen(laplacian_from_weights(w_tilde));

  ReductionErrorReport rep;
  for (std::size_t i = 0; i < d; ++i) {
    rep.e_norm += el.eigenvalues[i];
    rep.e_tilde_norm += elt.eigenvalues[i];
  }
  const double slack = 1e-9 * std::max({el.eigenvalues.back(), 1.0}) * static_cast<double>(d);
  rep.holds = rep.e_tilde_norm <= rep.e_norm + slack;
  return rep;
}

// Rank-one equivalence: with descriptors S_i = x_i^T x_i the stacked pencil
// side S^T W~ S equals X^T W_V X for the rescaled weights
// (W_V)_ij = W~_ij <x_i, x_j>. Both sides are assembled independently and
// compared entrywise; this is a purely algebraic identity (no logarithms).
inline RankOneReport rank_one_equivalence_check(const std::vector<std::vector<double>>& xs,
                                                const Matrix& w_tilde) {
  validate_weight_matrix(w_tilde, "rank_one_equivalence_check");
  const std::size_t n = xs.size();
  if (n == 0) throw InvalidInput("rank_one_equivalence_check: empty point list");
  if (w_tilde.rows() != n)
    throw InvalidInput("rank_one_equivalence_check: weight size does not match point count");
  const std::size_t dim = xs.front().size();
  for (const auto& x : xs) {
    if (x.size() != dim) throw InvalidInput("rank_one_equivalence_check: ragged point list");
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    if (!(nrm > 0.0)) throw InvalidInput("rank_one_equivalence_check: zero row vector");
  }

  // Left side: sum_ij W~_ij (x_i^T x_i)(x_j^T x_j), literal matrix products.
  std::vector<Matrix> outer(n, Matrix(dim, dim));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) outer[i](r, c) = xs[i][r] * xs[i][c];
  Matrix lhs(dim, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double w = w_tilde(i, j);
      if (w != 0.0) lhs += w * (outer[i] * outer[j]);
    }

  // Right side: X^T W_V X with (W_V)_ij = W~_ij <x_i, x_j>.
  Matrix w_v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w_v(i, j) = w_tilde(i, j) * dot(xs[i], xs[j]);
  Matrix rhs(dim, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double w = w_v(i, j);
      if (w == 0.0) continue;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) rhs(r, c) += w * xs[i][r] * xs[j][c];
    }

  RankOneReport rep;
  rep.max_residual = (lhs - rhs).max_abs();
  const double scale = std::max(lhs.max_abs(), rhs.max_abs());
  rep.holds = rep.max_residual <= 1e-10 * scale || rep.max_residual == 0.0;
  return rep;
}

}  // namespace lielpp
