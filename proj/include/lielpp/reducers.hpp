#pragma once

// Lie-LPP: locality-preserving dimensionality reduction on the SPD matrix
// Lie group, plus the classical vector LPP baseline.
//
// Fitting builds a k-NN heat-kernel graph, accumulates the D x D pencil
//   M = sum_i deg(i) X_i X_i - sum_{(i,j) edge} W_ij (X_i X_j + X_j X_i)
//   B = sum_i deg(i) X_i X_i
// with X_i = log(S_i) under LEM (raw entries under the EM ablation), and
// takes the bottom-d eigenvectors of the pencil (M, B). The ND x ND block
// matrices are never materialized; memory stays O(D^2).
//
// The transform maps S to exp(A^T log(S) A), which is again SPD and
// respects the group operation: A^T (X1 + X2) A distributes.

#include <optional>
#include <vector>

#include "lielpp/descriptors.hpp"
#include "lielpp/errors.hpp"
#include "lielpp/generalized_eigen.hpp"
#include "lielpp/graph.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/spd.hpp"

namespace lielpp {

struct ProjectionMap {
  Matrix basis;                     // A, D x d, full column rank
  std::vector<double> eigenvalues;  // d smallest pencil eigenvalues, ascending
  Metric metric = Metric::LEM;
  std::size_t k = 0;
  double t = 0.0;
  double regularization_applied = 0.0;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
};

struct LppMap {
  Matrix basis;  // D x d
  std::vector<double> eigenvalues;
};

namespace detail {

// Pencil accumulation shared by the SPD and vector paths. reps[i] is either a
// symmetric D x D matrix (rows of the stacked log matrix) or the rank-one
// contribution is handled by the caller passing x_i x_j^T style products.
inline void accumulate_pencil(const std::vector<Matrix>& reps, const WeightedGraph& wg,
                              Matrix& m_out, Matrix& b_out) {
  const std::size_t dim = reps.front().rows();
  Matrix m(dim, dim), b(dim, dim);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const Matrix sq = reps[i] * reps[i];
    b += wg.degrees[i] * sq;
    m += wg.degrees[i] * sq;
  }
  for (const GraphEdge& e : wg.edges) {
    const double w = wg.weights(e.i, e.j);
    if (w == 0.0) continue;
    const Matrix cross = reps[e.i] * reps[e.j];
    m -= w * (cross + cross.transposed());
  }
  m_out = symmetrized(m);
  b_out = symmetrized(b);
}

inline std::vector<Matrix> fit_representations(const DescriptorSet& data, Metric metric) {
  std::vector<Matrix> reps;
  reps.reserve(data.size());
  for (const SpdMatrix& s : data.descriptors())
    reps.push_back(metric == Metric::LEM ? log_spd(s).entries() : s.entries());
  return reps;
}

}  // namespace detail

inline ProjectionMap lie_lpp_fit(const DescriptorSet& data, std::size_t k,
                                 std::optional<double> t, std::size_t d, Metric metric) {
  const std::size_t n = data.size();
  if (n < 3) throw InvalidInput("lie_lpp_fit: need at least 3 descriptors");
  if (k < 1 || k >= n) throw InvalidInput("lie_lpp_fit: k must satisfy 1 <= k < N");
  const std::size_t dim = data.dim();
  if (d < 1 || d >= dim) throw InvalidInput("lie_lpp_fit: d must satisfy 1 <= d < D");

  const NeighborGraph g = knn_graph(data, k, metric);
  const WeightedGraph wg = heat_weights(g, t);
  const std::vector<Matrix> reps = detail::fit_representations(data, metric);

  Matrix m, b;
  detail::accumulate_pencil(reps, wg, m, b);
  GenEigenResult ger = gen_eig_sym_def(m, b, d);

  ProjectionMap map;
  map.basis = std::move(ger.basis);
  map.eigenvalues = std::move(ger.eigenvalues);
  map.metric = metric;
  map.k = k;
  map.t = wg.t;
  map.regularization_applied = ger.regularization_applied;
  map.input_dim = dim;
  map.output_dim = d;
  return map;
}

// Y = exp(A^T log(S) A), a d x d SPD matrix.
inline SpdMatrix lie_lpp_transform(const ProjectionMap& map, const SpdMatrix& s) {
  if (s.dim() != map.input_dim) throw InvalidInput("lie_lpp_transform: dimension mismatch");
  const Matrix x = log_spd(s).entries();
  const Matrix projected = map.basis.transposed() * x * map.basis;
  return exp_sym(SymMatrix(symmetrized(projected)));
}

// Graph energy of a candidate basis:
//   sum over unordered edges of W_ij ||A^T (X_i - X_j) A||_F^2
// (equal to one half of the full double sum).
inline double lie_lpp_energy(const Matrix& basis, const DescriptorSet& data,
                             const WeightedGraph& wg, Metric metric = Metric::LEM) {
  if (wg.n() != data.size()) throw InvalidInput("lie_lpp_energy: graph/data size mismatch");
  if (basis.rows() != data.dim()) throw InvalidInput("lie_lpp_energy: basis dimension mismatch");
  const std::vector<Matrix> reps = detail::fit_representations(data, metric);
  const Matrix at = basis.transposed();
  double energy = 0.0;
  for (const GraphEdge& e : wg.edges) {
    const double w = wg.weights(e.i, e.j);
    if (w == 0.0) continue;
    const Matrix diff = reps[e.i] - reps[e.j];
    const double nrm = (at * diff * basis).frobenius_norm();
    energy += w * nrm * nrm;
  }
  return energy;
}

// Classical vector LPP: solve X L X^T a = lambda X D X^T a on a Euclidean
// k-NN heat-kernel graph; the transform is the linear map y = A^T x.
inline LppMap lpp_fit(const std::vector<std::vector<double>>& points, std::size_t k,
                      std::optional<double> t, std::size_t d) {
  const std::size_t n = points.size();
  if (n < 3) throw InvalidInput("lpp_fit: need at least 3 points");
  if (k < 1 || k >= n) throw InvalidInput("lpp_fit: k must satisfy 1 <= k < N");
  const std::size_t dim = points.front().size();
  if (d < 1 || d >= dim) throw InvalidInput("lpp_fit: d must satisfy 1 <= d < D");
  for (const auto& p : points)
    if (p.size() != dim) throw InvalidInput("lpp_fit: points of unequal dimension");

  const NeighborGraph g = knn_graph(points, k);
  const WeightedGraph wg = heat_weights(g, t);

  Matrix m(dim, dim), b(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = points[i];
    const double deg = wg.degrees[i];
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = r; c < dim; ++c) {
        const double v = deg * x[r] * x[c];
        b(r, c) += v;
        if (r != c) b(c, r) += v;
        m(r, c) += v;
        if (r != c) m(c, r) += v;
      }
  }
  for (const GraphEdge& e : wg.edges) {
    const double w = wg.weights(e.i, e.j);
    if (w == 0.0) continue;
    const auto& xi = points[e.i];
    const auto& xj = points[e.j];
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) m(r, c) -= w * (xi[r] * xj[c] + xj[r] * xi[c]);
  }

  GenEigenResult ger = gen_eig_sym_def(symmetrized(m), symmetrized(b), d);
  return LppMap{std::move(ger.basis), std::move(ger.eigenvalues)};
}

inline std::vector<double> lpp_transform(const LppMap& map, const std::vector<double>& x) {
  if (x.size() != map.basis.rows()) throw InvalidInput("lpp_transform: dimension mismatch");
  std::vector<double> y(map.basis.cols(), 0.0);
  for (std::size_t c = 0; c < map.basis.cols(); ++c)
    for (std::size_t r = 0; r < x.size(); ++r) y[c] += map.basis(r, c) * x[r];
  return y;
}

}  // namespace lielpp
