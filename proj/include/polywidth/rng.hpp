// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace polywidth {

/// Philox4x32-10 block function: maps a 128-bit counter under a 64-bit key
/// to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// A stream is identified by (seed, tag, index); distinct triples give
/// independent sequences, so work can be split into chunks that each derive
/// their own stream without any shared state. The sequence of a stream does
/// not depend on how many other streams exist or in which order they run.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  CounterStream(std::uint64_t seed, std::uint32_t tag, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform double in (0, 1).
  double uniform_open();
  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t tag_;
  std::uint64_t index_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int position_ = 4;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

/// Stream tags keep the randomness of different experiments disjoint even
/// when they share a seed.
namespace stream_tag {
inline constexpr std::uint32_t kBirthday = 1;
inline constexpr std::uint32_t kPoissonX = 2;
inline constexpr std::uint32_t kPoissonY = 3;
inline constexpr std::uint32_t kPoissonSum = 4;
inline constexpr std::uint32_t kGaussianWidth = 5;
inline constexpr std::uint32_t kTjCoefficients = 6;
inline constexpr std::uint32_t kTjMatrices = 7;
inline constexpr std::uint32_t kSubset = 8;
inline constexpr std::uint32_t kUpperTail = 9;
inline constexpr std::uint32_t kIntersective = 10;
inline constexpr std::uint32_t kAnnealing = 11;
inline constexpr std::uint32_t kTransitivity = 12;
inline constexpr std::uint32_t kPolyMap = 13;
inline constexpr std::uint32_t kPowerStart = 14;
}  // namespace stream_tag

}  // namespace polywidth
