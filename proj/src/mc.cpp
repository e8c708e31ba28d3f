// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace polywidth {

void MomentAccumulator::add(double value) {
  ++count_;
  const double delta = value - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (value - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
}

double MomentAccumulator::variance() const {
  if (count_ < 2) return 0.0;
  return std::max(0.0, m2_ / static_cast<double>(count_ - 1));
}

McEstimate MomentAccumulator::estimate(std::uint64_t seed) const {
  McEstimate result;
  result.mean = mean_;
  result.samples = count_;
  result.seed = seed;
  result.std_error =
      count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
  return result;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<MomentAccumulator> run_samples(
    const McOptions& options, std::uint32_t tag, std::size_t width,
    const std::function<void(CounterStream&, std::span<double>)>& draw) {
  const std::uint64_t chunks = (options.samples + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<MomentAccumulator>> partial(
      chunks, std::vector<MomentAccumulator>(width));
  parallel_for(chunks, options.threads, [&](std::size_t chunk) {
    CounterStream stream(options.seed, tag, chunk);
    std::vector<double> values(width);
    const std::uint64_t begin = chunk * kChunkSize;
    const std::uint64_t end = std::min(options.samples, begin + kChunkSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      draw(stream, values);
      for (std::size_t j = 0; j < width; ++j) partial[chunk][j].add(values[j]);
    }
  });
  std::vector<MomentAccumulator> merged(width);
  for (const auto& chunk : partial) {
    for (std::size_t j = 0; j < width; ++j) merged[j].merge(chunk[j]);
  }
  return merged;
}

McEstimate estimate_mean(const McOptions& options, std::uint32_t tag,
                         const std::function<double(CounterStream&)>& draw) {
  auto acc = run_samples(options, tag, 1,
                         [&](CounterStream& stream, std::span<double> out) {
                           out[0] = draw(stream);
                         });
  return acc[0].estimate(options.seed);
}

}  // namespace polywidth
