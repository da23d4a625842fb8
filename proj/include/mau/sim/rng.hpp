#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace mau {

/// 64-bit FNV-1a. Used for stream labels and scenario hashes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// A labeled random substream.
///
/// The raw generator is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random>, because the standard distributions are implementation-defined and
/// would make traces differ between standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string label);

  const std::string& label() const { return label_; }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi], rejection-sampled, unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }
  double exponential(double mean);

 private:
  std::string label_;
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Derives the substream for `label` under `master_seed`. Throws
/// std::invalid_argument on an empty label.
RngStream derive_stream(std::uint64_t master_seed, std::string_view label);

}  // namespace mau
