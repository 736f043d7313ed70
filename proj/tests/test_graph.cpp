#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lielpp/descriptors.hpp"
#include "lielpp/graph.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/sym_eigen.hpp"
#include "support.hpp"

using namespace lielpp;
using testsupport::diag;
using testsupport::random_spd;

namespace {

DescriptorSet three_scaled_identities() {
  DescriptorSet d;
  d.add(make_spd(Matrix::identity(2), SpdMode::Strict), "a", "0");
  d.add(make_spd(diag({std::exp(1.0), std::exp(1.0)}), SpdMode::Strict), "a", "1");
  d.add(make_spd(diag({std::exp(4.0), std::exp(4.0)}), SpdMode::Strict), "a", "2");
  return d;
}

std::vector<std::pair<std::size_t, std::size_t>> edge_pairs(const NeighborGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const GraphEdge& e : g.edges) out.emplace_back(e.i, e.j);
  return out;
}

DescriptorSet random_descriptors(Rng& rng, std::size_t n, std::size_t dim) {
  DescriptorSet d;
  for (std::size_t i = 0; i < n; ++i)
    d.add(random_spd(rng, dim), "c" + std::to_string(i % 3), "s" + std::to_string(i));
  return d;
}

}  // namespace

TEST_CASE("knn tie-break goes to the lower index") {
  std::vector<std::vector<double>> pts = {{0.0}, {0.0}, {0.0}};
  const NeighborGraph g = knn_graph(pts, 1);
  REQUIRE(edge_pairs(g) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}});
  for (const GraphEdge& e : g.edges) REQUIRE(e.squared_distance == 0.0);
}

TEST_CASE("knn under LEM uses log-domain distances") {
  const NeighborGraph g = knn_graph(three_scaled_identities(), 1, Metric::LEM);
  REQUIRE(edge_pairs(g) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  REQUIRE(g.edges[0].squared_distance == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(g.edges[1].squared_distance == Catch::Approx(18.0).margin(1e-10));
}

TEST_CASE("knn under EM uses raw-entry distances") {
  const NeighborGraph g = knn_graph(three_scaled_identities(), 1, Metric::EM);
  REQUIRE(edge_pairs(g) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  const double e = std::exp(1.0), e4 = std::exp(4.0);
  REQUIRE(g.edges[0].squared_distance == Catch::Approx(2.0 * (e - 1.0) * (e - 1.0)));
  REQUIRE(g.edges[1].squared_distance == Catch::Approx(2.0 * (e4 - e) * (e4 - e)));
}

TEST_CASE("knn rejects bad k") {
  std::vector<std::vector<double>> pts = {{0.0}, {1.0}, {2.0}};
  REQUIRE_THROWS_AS(knn_graph(pts, 3), InvalidInput);
  REQUIRE_THROWS_AS(knn_graph(pts, 0), InvalidInput);
  REQUIRE_THROWS_AS(knn_graph(std::vector<std::vector<double>>{{0.0}}, 1), InvalidInput);
}

TEST_CASE("heat weights basics") {
  std::vector<std::vector<double>> pts = {{0.0}, {0.0}};
  const WeightedGraph coincident = heat_weights(knn_graph(pts, 1), 1.0);
  REQUIRE(coincident.weights(0, 1) == 1.0);

  std::vector<std::vector<double>> apart = {{0.0}, {2.0}};  // squared distance 4
  const WeightedGraph wg = heat_weights(knn_graph(apart, 1), 4.0);
  REQUIRE(wg.weights(0, 1) == Catch::Approx(std::exp(-1.0)).margin(1e-15));

  // 2-node Laplacian [[w,-w],[-w,w]] has eigenvalues {0, 2w}.
  const SymEigen e = sym_eigen(wg.laplacian);
  REQUIRE(e.eigenvalues[0] == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(e.eigenvalues[1] == Catch::Approx(2.0 * std::exp(-1.0)).margin(1e-12));

  REQUIRE_THROWS_AS(heat_weights(knn_graph(apart, 1), 0.0), InvalidInput);
  REQUIRE_THROWS_AS(heat_weights(knn_graph(apart, 1), -1.0), InvalidInput);
}

TEST_CASE("auto bandwidth is the median edge squared distance") {
  std::vector<std::vector<double>> pts = {{0.0}, {1.0}, {3.0}, {7.0}};
  const NeighborGraph g = knn_graph(pts, 2);
  // Edge squared distances: (0,1)=1, (0,2)=9, (1,2)=4, (1,3)=36, (2,3)=16.
  const WeightedGraph wg = heat_weights(g);
  REQUIRE(wg.t == Catch::Approx(9.0));

  // All-zero distances fall back to t = 1.
  std::vector<std::vector<double>> same = {{0.0}, {0.0}, {0.0}};
  REQUIRE(heat_weights(knn_graph(same, 1)).t == 1.0);
}

TEST_CASE("laplacian invariants on random graphs") {
  Rng rng(50);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + rng.integer(10);
    const DescriptorSet data = random_descriptors(rng, n, 3);
    const WeightedGraph wg =
        heat_weights(knn_graph(data, 1 + rng.integer(3), Metric::LEM));

    double max_deg = 0.0;
    for (double d : wg.degrees) max_deg = std::max(max_deg, d);
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += wg.laplacian(i, j);
        REQUIRE(wg.weights(i, j) >= 0.0);
        REQUIRE(wg.weights(i, j) <= 1.0);
        REQUIRE(wg.weights(i, j) == wg.weights(j, i));
      }
      REQUIRE(std::abs(row) <= 1e-12 * std::max(max_deg, 1.0));
      REQUIRE(wg.weights(i, i) == 0.0);
    }

    // Quadratic form identity x^T L x = 1/2 sum_ij W_ij (x_i - x_j)^2.
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> x(n);
      for (double& v : x) v = rng.gaussian();
      double quad = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) quad += x[i] * wg.laplacian(i, j) * x[j];
      double direct = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          direct += 0.5 * wg.weights(i, j) * (x[i] - x[j]) * (x[i] - x[j]);
      REQUIRE(std::abs(quad - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }

    const SymEigen e = sym_eigen(wg.laplacian);
    REQUIRE(e.eigenvalues.front() >= -1e-9 * std::max(e.eigenvalues.back(), 0.0));
  }
}

TEST_CASE("normalized laplacian on scalars") {
  std::vector<std::vector<double>> pts = {{0.0}, {1.0}};
  const WeightedGraph wg = heat_weights(knn_graph(pts, 1), 2.0);

  const auto constant = normalized_laplacian_apply(std::vector<double>{3.0, 3.0}, wg);
  REQUIRE(std::abs(constant[0]) < 1e-14);
  REQUIRE(std::abs(constant[1]) < 1e-14);

  const auto delta = normalized_laplacian_apply(std::vector<double>{1.0, 0.0}, wg);
  REQUIRE(delta[0] == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(delta[1] == Catch::Approx(-1.0).margin(1e-14));
}

TEST_CASE("every node keeps at least k incident edges after OR symmetrization") {
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4 + rng.integer(10);
    std::vector<std::vector<double>> pts(n, std::vector<double>(2));
    for (auto& p : pts)
      for (double& v : p) v = rng.gaussian();
    const std::size_t k = 1 + rng.integer(n - 1);
    const NeighborGraph g = knn_graph(pts, k);
    std::vector<std::size_t> incident(n, 0);
    for (const GraphEdge& e : g.edges) {
      REQUIRE(e.i < e.j);  // no self-edges, canonical order
      ++incident[e.i];
      ++incident[e.j];
    }
    for (std::size_t deg : incident) REQUIRE(deg >= k);
  }
}

TEST_CASE("normalized laplacian on matrix-valued node functions") {
  std::vector<std::vector<double>> pts = {{0.0}, {1.0}};
  const WeightedGraph wg = heat_weights(knn_graph(pts, 1), 2.0);
  Matrix m(2, 2);
  m(0, 0) = 2.0;
  m(0, 1) = m(1, 0) = 1.0;
  m(1, 1) = 3.0;
  const std::vector<SymMatrix> values = {SymMatrix(m), SymMatrix(Matrix(2, 2))};
  const auto out = normalized_laplacian_apply(values, wg);
  // Same hand evaluation as the scalar case, applied entrywise.
  REQUIRE(frobenius_distance(out[0].entries(), m) < 1e-14);
  REQUIRE(frobenius_distance(out[1].entries(), -1.0 * m) < 1e-14);
}

TEST_CASE("normalized laplacian annihilates constant SPD families") {
  Rng rng(51);
  const SpdMatrix s = random_spd(rng, 3);
  std::vector<SpdMatrix> nodes(4, s);
  DescriptorSet d;
  for (std::size_t i = 0; i < 4; ++i) d.add(s, "a", std::to_string(i));
  const WeightedGraph wg = heat_weights(knn_graph(d, 2, Metric::LEM));
  for (const SymMatrix& v : spd_normalized_laplacian_apply(nodes, wg))
    REQUIRE(v.frobenius_norm() < 1e-10);
}

TEST_CASE("isolated nodes are reported by name") {
  Matrix w(3, 3);
  w(0, 1) = w(1, 0) = 0.5;  // node 2 isolated
  const WeightedGraph wg = weighted_graph_from_weights(w);
  try {
    normalized_laplacian_apply(std::vector<double>{1.0, 2.0, 3.0}, wg);
    FAIL("expected DegenerateInput");
  } catch (const DegenerateInput& e) {
    REQUIRE(std::string(e.what()).find("node 2") != std::string::npos);
  }
}
