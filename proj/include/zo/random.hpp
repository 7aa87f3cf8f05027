#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace zo {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is identified by (seed, stream id); every 64-bit draw is a pure
/// function of (seed, stream id, counter). Streams hold no shared state, so
/// they can be copied into worker threads freely. `substream(k)` forks a
/// deterministic child stream that does not overlap the parent.
///
/// Satisfies the UniformRandomBitGenerator requirements, so it can drive the
/// standard `<random>` distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return draw_at(counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Child stream `k`. Children of distinct k (and of distinct parents) are
  /// independent Philox streams under the same key.
  [[nodiscard]] RandomStream substream(std::uint64_t k) const noexcept;

  /// The draw that `operator()` would return at position `counter`.
  [[nodiscard]] result_type draw_at(std::uint64_t counter) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
};

/// Raw Philox4x32-10 block function; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept;

}  // namespace zo
