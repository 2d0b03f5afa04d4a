#include "tdlab/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tdlab {

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0)
    throw std::invalid_argument("Rng::uniform_int: n must be positive");
  // Reject draws above the largest multiple of n so x % n is unbiased.
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t x = gen_();
  while (x >= limit)
    x = gen_();
  return x % n;
}

double Rng::normal() {
  // u1 lives in (0, 1] so the log stays finite.
  const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::Index Rng::categorical(const Eigen::Ref<const Eigen::VectorXd>& p) {
  const double u = uniform();
  double acc = 0.0;
  Eigen::Index last = -1;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0)
      continue;
    acc += p[i];
    last = i;
    if (u < acc)
      return i;
  }
  if (last < 0)
    throw std::invalid_argument("Rng::categorical: distribution has no positive mass");
  return last;
}

}
