// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "polywidth/rng.hpp"

namespace polywidth {

/// Result of a Monte-Carlo estimator. `std_error` is the sample standard
/// deviation divided by sqrt(samples).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Running mean and second central moment (Welford), mergeable with Chan's
/// pairwise update.
class MomentAccumulator {
 public:
  void add(double value);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero for fewer than two observations.
  double variance() const;
  McEstimate estimate(std::uint64_t seed) const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Samples per chunk. Chunk boundaries depend only on the sample count, so
/// results are identical for every worker count.
inline constexpr std::uint64_t kChunkSize = 512;

/// Runs `body(index)` for index in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

/// Draws `options.samples` observations of a `width`-dimensional statistic.
/// Sample i lives in chunk i / kChunkSize, and each chunk owns the stream
/// (seed, tag, chunk). Per-chunk accumulators are merged in chunk order.
/// `draw(stream, out)` fills `out` (size `width`) for one sample.
std::vector<MomentAccumulator> run_samples(
    const McOptions& options, std::uint32_t tag, std::size_t width,
    const std::function<void(CounterStream&, std::span<double>)>& draw);

/// Scalar convenience wrapper around run_samples.
McEstimate estimate_mean(const McOptions& options, std::uint32_t tag,
                         const std::function<double(CounterStream&)>& draw);

}  // namespace polywidth
