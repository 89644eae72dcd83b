#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "bigd/common.hpp"

namespace bigd {

// Deterministic normal/uniform sampler. Box-Muller on top of the raw
// mt19937_64 stream so sequences are reproducible across platforms and
// standard-library versions.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  Vector normal_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Uniform sample from the closed ball of the given radius around center.
  Vector ball(const Vector& center, double radius) {
    const int n = static_cast<int>(center.size());
    Vector dir = normal_vector(n);
    const double norm = dir.norm();
    if (norm == 0.0) return center;
    const double r = radius * std::pow(uniform(), 1.0 / n);
    return center + (r / norm) * dir;
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bigd
