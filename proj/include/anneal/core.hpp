#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace anneal {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

// Invalid parameters or configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A failure while searching (bad objective value, degenerate sample, ...).
class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The objective returned a non-finite value or was called with the wrong
// dimension. Carries the offending point.
class EvaluationError : public SearchError {
 public:
  EvaluationError(const std::string& what, Vector x)
      : SearchError(what), point_(std::move(x)) {}
  const Vector& point() const { return point_; }

 private:
  Vector point_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

// Uniform draw on [0, 1) using the top 53 bits of one engine output. Unlike
// std::uniform_real_distribution this is bit-identical across standard
// libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n).
inline Index uniform_index(Rng& rng, Index n) {
  return static_cast<Index>(uniform01(rng) * static_cast<double>(n));
}

inline double standard_normal(Rng& rng) {
  // Box-Muller without caching so each call consumes exactly two draws.
  double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for an independent substream keyed by (seed, a, b).
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

}  // namespace anneal
