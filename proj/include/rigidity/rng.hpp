#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

#include "rigidity/linalg.hpp"

namespace rigidity {

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Counter-based generator: output k of a stream is mix64(key + k * gamma).
/// Streams are derived from a parent key, so a (seed, suite, property,
/// trial) tuple always yields the same numbers regardless of call order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return detail::mix64(key_ + (++counter_) * kGamma); }

  std::uint64_t key() const { return key_; }

  Rng split(std::uint64_t label) const {
    return Rng(detail::mix64(key_ ^ detail::mix64(label + kGamma)));
  }
  Rng split(std::string_view label) const { return split(detail::fnv1a(label)); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(*this); }

  double gaussian() { return normal_(*this); }

  std::size_t below(std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(*this);
  }

  /// Entries N(0,1) over the reals; real and imaginary parts N(0,1/2) over C.
  Matrix gaussian_matrix(Index rows, Index cols, Field field) {
    CMatrix m(rows, cols);
    const double s = field == Field::Real ? 1.0 : std::sqrt(0.5);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) {
        const double re = gaussian() * s;
        const double im = field == Field::Real ? 0.0 : gaussian() * s;
        m(i, j) = Complex(re, im);
      }
    }
    return Matrix(std::move(m), field);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stream for one trial of one property of one suite.
inline Rng trial_stream(std::uint64_t seed, std::string_view suite, std::string_view property,
                        std::uint64_t trial) {
  return Rng(seed).split(suite).split(property).split(trial);
}

}  // namespace rigidity
