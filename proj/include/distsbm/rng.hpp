#pragma once

#include <cstdint>
#include <string_view>

namespace distsbm {

// All randomness in the library comes from SplitMix64 (Steele, Lea & Flood,
// 2014). The generator is counter-based: the i-th output of a stream keyed by
// `key` is mix64(key + (i + 1) * 0x9E3779B97F4A7C15), so any position of any
// stream can be computed directly and results are identical on every platform.

/// The SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent stream key from a parent seed and a label, so that
/// phases of an experiment ("sample", "labels", "eig", ...) can be rerun alone.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) built from the top 53 bits of a 64-bit word.
inline double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-indexed uniform: the `counter`-th draw of the stream `key`.
inline double uniform_at(std::uint64_t key, std::uint64_t counter) noexcept {
  return to_unit(mix64(key + (counter + 1) * 0x9E3779B97F4A7C15ULL));
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }
  std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Uniform in [0, 1).
  double uniform() noexcept { return to_unit(next()); }
  /// Uniform in (0, 1]; safe as a log() argument.
  double uniform_pos() noexcept { return 1.0 - uniform(); }
  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;
  double normal() noexcept;
  /// Poisson deviate: inversion for mean < 10, PTRS transformed rejection
  /// (Hormann 1993) otherwise. Both are exact.
  std::uint64_t poisson(double mean) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace distsbm
