#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace phlab {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (key = master seed, stream id). The block counter
/// occupies the low 64 bits of the 128-bit counter and the stream id the high
/// 64 bits, so any two streams are disjoint and every draw is a pure function of
/// (seed, stream, position). This is what makes replicate-parallel experiments
/// independent of scheduling order.
class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  /// Stream for a nested replicate path, e.g. derive(seed, {experiment, n_index, replicate}).
  static RandomStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u32(); }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

/// SplitMix64 finalizer; used to combine stream path components.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace phlab
