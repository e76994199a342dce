#pragma once

// Counter-based random numbers, reproducible across platforms and languages.
//
//   mix(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//            z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//            return z ^ (z >> 31)
//   key   = mix(seed ^ mix(stream + 0x9E3779B97F4A7C15))
//   x_k   = mix(key + (k + 1) * 0x9E3779B97F4A7C15)      (k = 0, 1, 2, ...)
//   u_k   = (x_k >> 11) * 2^-53                          in [0, 1)
//
// Normals use Box-Muller on consecutive uniforms (u1, u2):
//   sqrt(-2 ln(1 - u1)) * cos(2 pi u2), then sqrt(-2 ln(1 - u1)) * sin(2 pi u2).
// All arithmetic is modulo 2^64.

#include <cmath>
#include <cstdint>

#include "linalg.hpp"

namespace diskfov {

class Rng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + kGolden))) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(1.0 - u1));
    spare_ = rad * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return rad * std::cos(kTwoPi * u2);
  }

  /// Real and imaginary parts independent standard normals.
  cplx complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  Matrix real_normal_matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (auto& z : m.data()) z = normal();
    return m;
  }

  Matrix complex_normal_matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (auto& z : m.data()) z = complex_normal();
    return m;
  }

  Vector unit_vector(std::size_t n) {
    Vector v(n);
    for (auto& z : v) z = complex_normal();
    const double nv = norm(v);
    for (auto& z : v) z /= nv;
    return v;
  }

  /// Haar-distributed unitary: Gram-Schmidt on a complex Ginibre matrix (R
  /// then has a positive diagonal, which is what makes Q Haar).
  Matrix unitary(std::size_t n) {
    Matrix z = complex_normal_matrix(n, n);
    Matrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Vector v = z.col(j);
      for (std::size_t k = 0; k < j; ++k) {
        const Vector qk = q.col(k);
        const cplx p = dot(qk, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= p * qk[i];
      }
      const double nv = norm(v);
      for (auto& x : v) x /= nv;
      q.set_col(j, v);
    }
    return q;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace diskfov
