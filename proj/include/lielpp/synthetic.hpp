#pragma once

// Seeded synthetic SPD cluster generator: class c gets a random unit-norm
// symmetric direction scaled by `separation` as its log-domain center, and
// samples are exp(center + noise) with noise of Frobenius norm
// separation/10. Log-Euclidean distances between samples therefore mirror
// the log-domain layout exactly.

#include <cstdint>
#include <string>

#include "lielpp/descriptors.hpp"
#include "lielpp/errors.hpp"
#include "lielpp/matrix.hpp"
#include "lielpp/rng.hpp"
#include "lielpp/spd.hpp"

namespace lielpp {

namespace detail {

inline Matrix random_unit_symmetric(Rng& rng, std::size_t dim) {
  Matrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = r; c < dim; ++c) m(r, c) = m(c, r) = rng.gaussian();
  const double nrm = m.frobenius_norm();
  if (nrm > 0.0) m *= 1.0 / nrm;
  return m;
}

}  // namespace detail

inline DescriptorSet synth_spd_clusters(std::size_t classes, std::size_t per_class,
                                        std::size_t dim, double separation,
                                        std::uint64_t seed) {
  if (classes < 1 || per_class < 1 || dim < 1)
    throw InvalidInput("synth_spd_clusters: counts must be >= 1");
  if (separation < 0.0) throw InvalidInput("synth_spd_clusters: separation must be >= 0");

  Rng rng(mix_seed(seed, "synth_spd_clusters"));
  std::vector<Matrix> centers;
  centers.reserve(classes);
  for (std::size_t c = 0; c < classes; ++c)
    centers.push_back(separation * detail::random_unit_symmetric(rng, dim));

  const double sigma = separation / 10.0;
  DescriptorSet out;
  for (std::size_t c = 0; c < classes; ++c)
    for (std::size_t s = 0; s < per_class; ++s) {
      const Matrix noise = sigma * detail::random_unit_symmetric(rng, dim);
      out.add(exp_sym(SymMatrix(centers[c] + noise)), "c" + std::to_string(c),
              "synth-c" + std::to_string(c) + "-" + std::to_string(s));
    }
  return out;
}

}  // namespace lielpp
