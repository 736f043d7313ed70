#pragma once

// Deterministic random numbers. The gaussian is hand-rolled (Box-Muller on
// mt19937_64 uniforms) so that seeded outputs do not depend on the standard
// library's distribution implementation.

#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace lielpp {

// Derive a stage-specific seed from a master seed, so independent pipeline
// stages draw from independent streams.
inline std::uint64_t mix_seed(std::uint64_t master, std::string_view stage) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the stage name
  for (char c : stage) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::uint64_t z = master ^ h;
  z += 0x9e3779b97f4a7c15ull;  // splitmix64 finalizer
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, bound). Modulo bias is irrelevant at our scales.
  std::uint64_t integer(std::uint64_t bound) { return engine_() % bound; }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lielpp
