#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace tdlab {

// Seeded random source behind every stochastic code path. All draws are
// explicit transforms of mt19937_64 output, whose sequence is pinned by the
// standard, so one seed reproduces a run on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased draw from {0, ..., n - 1}.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via Box-Muller, one value per call.
  double normal();

  // Index distributed according to the probability vector p. Rounding
  // leftovers fall on the last positive entry.
  Eigen::Index categorical(const Eigen::Ref<const Eigen::VectorXd>& p);

  // Independent generator for a sub-task, derived from this stream.
  Rng fork() { return Rng(gen_()); }

private:
  std::mt19937_64 gen_;
};

}
