/**
 * @brief Seeded additive noise for far-field data.
 *
 * U_delta = U + delta (|U| / |V|) V with V a complex vector whose real and
 * imaginary parts are independent standard normals. The normals come from a
 * SplitMix64 counter stream (state advanced by 0x9E3779B97F4A7C15, standard
 * finalizer) mapped to doubles in (0, 1) with 53-bit resolution and paired by
 * the Box-Muller transform. The sequence therefore depends only on the seed,
 * not on the standard library.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "elscat/lippmann_schwinger.hpp"

namespace elscat {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal pair via Box-Muller.
  std::pair<double, double> normal_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * kPi * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  std::uint64_t state_;
};

inline Eigen::VectorXcd gaussian_vector(Eigen::Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [a, b] = rng.normal_pair();
    v(i) = Complex(a, b);
  }
  return v;
}

inline Eigen::VectorXcd add_noise(const Eigen::VectorXcd& u, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw std::invalid_argument("add_noise: delta must be >= 0");
  if (delta == 0.0) return u;
  const Eigen::VectorXcd v = gaussian_vector(u.size(), seed);
  return u + (delta * u.norm() / v.norm()) * v;
}

inline FarFieldSet add_noise(const FarFieldSet& u, double delta, std::uint64_t seed) {
  return FarFieldSet::from_stacked(u.angles, add_noise(u.stacked(), delta, seed));
}

}  // namespace elscat
