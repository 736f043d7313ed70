#pragma once

// k-nearest-neighbor graphs under a pluggable metric, heat-kernel weights,
// and the graph Laplacian L = D - W. Neighborhoods are symmetrized with the
// OR-rule (union), which keeps every node's degree positive; distance ties
// break toward the lower node index so graphs are reproducible.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lielpp/descriptors.hpp"
#include "lielpp/errors.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/spd.hpp"

namespace lielpp {

enum class Metric { LEM, EM };

inline std::string metric_name(Metric m) { return m == Metric::LEM ? "lem" : "em"; }

struct GraphEdge {
  std::size_t i;  // i < j
  std::size_t j;
  double squared_distance;
};

struct NeighborGraph {
  std::size_t n = 0;
  std::vector<GraphEdge> edges;  // sorted by (i, j)
  std::size_t k = 0;
  Metric metric = Metric::LEM;
};

struct WeightedGraph {
  Matrix weights;               // symmetric, zero diagonal, entries in [0, 1]
  std::vector<double> degrees;  // deg(i) = sum_j W(j, i)
  Matrix laplacian;             // L = D - W
  double t = 0.0;               // bandwidth actually used
  std::vector<GraphEdge> edges;

  std::size_t n() const { return degrees.size(); }
};

namespace detail {

inline NeighborGraph knn_from_squared_distances(const Matrix& sq, std::size_t k, Metric metric) {
  const std::size_t n = sq.rows();
  if (n < 2) throw InvalidInput("knn_graph: need at least 2 points");
  if (k < 1 || k >= n)
    throw InvalidInput("knn_graph: k must satisfy 1 <= k < n (k = " + std::to_string(k) +
                       ", n = " + std::to_string(n) + ")");

  std::vector<std::vector<bool>> selected(n, std::vector<bool>(n, false));
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) cand.emplace_back(sq(i, j), j);
    std::sort(cand.begin(), cand.end());  // ties fall to the lower index
    for (std::size_t r = 0; r < k; ++r) selected[i][cand[r].second] = true;
  }

  NeighborGraph g;
  g.n = n;
  g.k = k;
  g.metric = metric;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (selected[i][j] || selected[j][i]) g.edges.push_back({i, j, sq(i, j)});
  return g;
}

}  // namespace detail

// k-NN graph over SPD descriptors: LEM uses the Log-Euclidean geodesic
// distance, EM the Frobenius distance on raw entries.
inline NeighborGraph knn_graph(const DescriptorSet& data, std::size_t k, Metric metric) {
  const std::size_t n = data.size();
  if (n < 2) throw InvalidInput("knn_graph: need at least 2 points");
  std::vector<Matrix> reps;
  reps.reserve(n);
  for (const SpdMatrix& s : data.descriptors())
    reps.push_back(metric == Metric::LEM ? log_spd(s).entries() : s.entries());
  Matrix sq(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = frobenius_distance(reps[i], reps[j]);
      sq(i, j) = sq(j, i) = d * d;
    }
  return detail::knn_from_squared_distances(sq, k, metric);
}

// k-NN graph over coordinate vectors (Euclidean).
inline NeighborGraph knn_graph(const std::vector<std::vector<double>>& points, std::size_t k) {
  const std::size_t n = points.size();
  if (n < 2) throw InvalidInput("knn_graph: need at least 2 points");
  Matrix sq(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sq(i, j) = sq(j, i) = squared_distance(points[i], points[j]);
  return detail::knn_from_squared_distances(sq, k, Metric::EM);
}

// Heat-kernel weights W_ij = exp(-d_ij^2 / t) on graph edges. Auto bandwidth
// is the median edge squared distance (1.0 when that is not positive).
inline WeightedGraph heat_weights(const NeighborGraph& g,
                                  std::optional<double> t = std::nullopt) {
  if (t && !(*t > 0.0)) throw InvalidInput("heat_weights: t must be > 0");

  double bandwidth;
  if (t) {
    bandwidth = *t;
  } else {
    std::vector<double> sq;
    sq.reserve(g.edges.size());
    for (const GraphEdge& e : g.edges) sq.push_back(e.squared_distance);
    std::sort(sq.begin(), sq.end());
    double median = 0.0;
    if (!sq.empty())
      median = (sq.size() % 2 == 1) ? sq[sq.size() / 2]
                                    : 0.5 * (sq[sq.size() / 2 - 1] + sq[sq.size() / 2]);
    bandwidth = median > 0.0 ? median : 1.0;
  }

  WeightedGraph wg;
  wg.t = bandwidth;
  wg.edges = g.edges;
  wg.weights = Matrix(g.n, g.n);
  for (const GraphEdge& e : g.edges) {
    const double w = std::exp(-e.squared_distance / bandwidth);
    wg.weights(e.i, e.j) = wg.weights(e.j, e.i) = w;
  }
  wg.degrees.assign(g.n, 0.0);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j) wg.degrees[i] += wg.weights(j, i);
  wg.laplacian = Matrix(g.n, g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    wg.laplacian(i, i) = wg.degrees[i];
    for (std::size_t j = 0; j < g.n; ++j)
      if (j != i) wg.laplacian(i, j) = -wg.weights(i, j);
  }
  return wg;
}

// Validate an externally supplied weight matrix: symmetric, nonnegative,
// zero diagonal.
inline void validate_weight_matrix(const Matrix& w, const char* who) {
  if (!w.is_square()) throw InvalidInput(std::string(who) + ": weight matrix must be square");
  if (!w.is_finite()) throw InvalidInput(std::string(who) + ": non-finite weights");
  const double scale = std::max(w.max_abs(), 1.0);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    if (std::abs(w(i, i)) > 1e-12 * scale)
      throw InvalidInput(std::string(who) + ": nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < w.cols(); ++j) {
      if (w(i, j) < 0.0)
        throw InvalidInput(std::string(who) + ": negative weight at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      if (std::abs(w(i, j) - w(j, i)) > 1e-12 * scale)
        throw InvalidInput(std::string(who) + ": weight matrix not symmetric at (" +
                           std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

inline Matrix laplacian_from_weights(const Matrix& w) {
  validate_weight_matrix(w, "laplacian_from_weights");
  const std::size_t n = w.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += w(j, i);
    l(i, i) = deg;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) l(i, j) = -w(i, j);
  }
  return l;
}

// Wrap a raw weight matrix as a WeightedGraph (t unknown, set to 0).
inline WeightedGraph weighted_graph_from_weights(const Matrix& w) {
  validate_weight_matrix(w, "weighted_graph_from_weights");
  const std::size_t n = w.rows();
  WeightedGraph wg;
  wg.weights = w;
  wg.t = 0.0;
  wg.degrees.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) wg.degrees[i] += w(j, i);
  wg.laplacian = laplacian_from_weights(w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (w(i, j) > 0.0) wg.edges.push_back({i, j, 0.0});
  return wg;
}

namespace detail {

inline void require_positive_degrees(const WeightedGraph& wg, const char* who) {
  for (std::size_t i = 0; i < wg.n(); ++i)
    if (!(wg.degrees[i] > 0.0))
      throw DegenerateInput(std::string(who) + ": node " + std::to_string(i) +
                            " is isolated (degree 0)");
}

}  // namespace detail

// Normalized graph Laplacian on nodewise scalars:
//   (D f)(i) = f(i) - (1/deg(i)) sum_j W_ij f(j).
inline std::vector<double> normalized_laplacian_apply(const std::vector<double>& values,
                                                      const WeightedGraph& wg) {
  if (values.size() != wg.n())
    throw InvalidInput("normalized_laplacian_apply: one value per node required");
  detail::require_positive_degrees(wg, "normalized_laplacian_apply");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) acc += wg.weights(i, j) * values[j];
    out[i] = values[i] - acc / wg.degrees[i];
  }
  return out;
}

// Same operator applied entrywise to symmetric-matrix-valued functions.
inline std::vector<SymMatrix> normalized_laplacian_apply(const std::vector<SymMatrix>& values,
                                                         const WeightedGraph& wg) {
  if (values.size() != wg.n())
    throw InvalidInput("normalized_laplacian_apply: one value per node required");
  detail::require_positive_degrees(wg, "normalized_laplacian_apply");
  std::vector<SymMatrix> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    Matrix acc(values[i].dim(), values[i].dim());
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double w = wg.weights(i, j);
      if (w != 0.0) acc += w * values[j].entries();
    }
    out.emplace_back(values[i].entries() - acc * (1.0 / wg.degrees[i]));
  }
  return out;
}

// SPD form: value at i is S_i^(1/2) (log S_i - sum_j Wbar_ij log S_j) S_i^(1/2)
// with Wbar_ij = W_ij / deg(i).
inline std::vector<SymMatrix> spd_normalized_laplacian_apply(const std::vector<SpdMatrix>& values,
                                                             const WeightedGraph& wg) {
  if (values.size() != wg.n())
    throw InvalidInput("spd_normalized_laplacian_apply: one value per node required");
  detail::require_positive_degrees(wg, "spd_normalized_laplacian_apply");
  std::vector<SymMatrix> logs;
  logs.reserve(values.size());
  for (const SpdMatrix& s : values) logs.push_back(log_spd(s));

  std::vector<SymMatrix> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    Matrix acc(values[i].dim(), values[i].dim());
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double w = wg.weights(i, j);
      if (w != 0.0) acc += (w / wg.degrees[i]) * logs[j].entries();
    }
    const Matrix root = detail::spectral_apply(
        values[i].eig(), [](double l) { return std::sqrt(l); }, "spd_normalized_laplacian_apply");
    out.emplace_back(symmetrized(root * (logs[i].entries() - acc) * root));
  }
  return out;
}

}  // namespace lielpp
