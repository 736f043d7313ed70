#pragma once

// Shared generators and matrix helpers for the test suites.

#include <vector>

#include "lielpp/matrix.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/spd.hpp"

namespace testsupport {

inline lielpp::Matrix random_symmetric(lielpp::Rng& rng, std::size_t n, double scale = 1.0) {
  lielpp::Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) m(r, c) = m(c, r) = scale * rng.gaussian();
  return m;
}

// Random SPD with controlled log-spectrum spread.
inline lielpp::SpdMatrix random_spd(lielpp::Rng& rng, std::size_t n, double log_scale = 0.5) {
  return lielpp::exp_sym(lielpp::SymMatrix(random_symmetric(rng, n, log_scale)));
}

// PSD Gram matrix G^T G of a rank x n gaussian matrix.
inline lielpp::Matrix random_psd(lielpp::Rng& rng, std::size_t n, std::size_t rank) {
  lielpp::Matrix g(rank, n);
  for (std::size_t r = 0; r < rank; ++r)
    for (std::size_t c = 0; c < n; ++c) g(r, c) = rng.gaussian();
  return lielpp::symmetrized(g.transposed() * g);
}

// Symmetric nonnegative zero-diagonal weight matrix.
inline lielpp::Matrix random_weights(lielpp::Rng& rng, std::size_t n, double density = 0.6) {
  lielpp::Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < density) w(i, j) = w(j, i) = rng.uniform();
  return w;
}

inline double rel_diff(const lielpp::Matrix& a, const lielpp::Matrix& b) {
  return lielpp::frobenius_distance(a, b) / (1.0 + a.frobenius_norm());
}

inline lielpp::Matrix diag(const std::vector<double>& values) {
  lielpp::Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

}  // namespace testsupport
