#pragma once

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "sasd/lifting.hpp"

namespace sasd {

/// Deterministic random source used by every generator in the project.
///
/// The bit stream is std::mt19937_64, which the C++ standard pins exactly,
/// so identical seeds give identical 64-bit draws on every platform. The
/// real-valued mappings are fixed here rather than delegated to the
/// implementation-defined standard distributions:
///   uniform01: ((bits >> 11) + 1) * 2^-53, uniform on (0, 1]
///   normal:    Box-Muller, sqrt(-2 ln u1) * cos(2 pi u2); each call
///              consumes exactly two uniforms and discards the sine branch.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitMix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-trial seed for a sweep cell. Depends only on (base, n, theta, trial),
/// so adding trials to one cell never changes the seeds of another.
inline std::uint64_t trialSeed(std::uint64_t base, std::uint64_t n, double theta,
                               std::uint64_t trial) {
  std::uint64_t s = base;
  s = splitMix64(s ^ n);
  s = splitMix64(s ^ std::bit_cast<std::uint64_t>(theta));
  s = splitMix64(s ^ trial);
  return s;
}

/// Bernoulli-Gaussian vector: entry n is nonzero with probability theta and
/// standard normal in value. Each entry always consumes one uniform (the
/// Bernoulli gate) and one normal, so the sparsity pattern and the values
/// come from fixed positions of the stream.
inline VectorX<double> bernoulliGaussian(Index n, double theta, std::uint64_t seed) {
  if (theta < 0.0 || theta > 1.0) {
    throw std::invalid_argument("bernoulliGaussian: theta outside [0, 1]");
  }
  Rng rng(seed);
  VectorX<double> x(n);
  for (Index i = 0; i < n; ++i) {
    const bool active = rng.uniform01() <= theta;
    const double g = rng.normal();
    x(i) = active ? g : 0.0;
  }
  return x;
}

/// Kernel of m independent standard normals scaled to unit l2 norm.
/// The measure-zero all-zero draw retries with seed + 1.
inline VectorX<double> gaussianKernel(Index m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("gaussianKernel: length must be positive");
  for (;;) {
    Rng rng(seed);
    VectorX<double> h(m);
    for (Index i = 0; i < m; ++i) h(i) = rng.normal();
    const double norm = h.norm();
    if (norm > 0.0) return h / norm;
    ++seed;
  }
}

}  // namespace sasd
