#pragma once

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11).
//
// A block is a pure function of (counter, key), so any position of any
// stream can be computed without generating its predecessors.

#include <array>
#include <cstdint>

namespace zenolab {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr int kRounds = 10;

  [[nodiscard]] static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int i = 0; i < kRounds; ++i) {
      if (i > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Uniform variates in [0, 1) for one trajectory, keyed by (seed, stream id).
///
/// Counter layout: words 0-1 hold the block index, words 2-3 the stream id.
/// Each block yields two 53-bit doubles.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream_id)),
        stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

  [[nodiscard]] double next_uniform() noexcept {
    if (lane_ == 0) {
      const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_),
                                    static_cast<std::uint32_t>(block_ >> 32), stream_lo_, stream_hi_};
      buffer_ = Philox4x32::block(ctr, key_);
      ++block_;
    }
    const std::uint64_t bits = (std::uint64_t{buffer_[2 * lane_]} << 32) | buffer_[2 * lane_ + 1];
    lane_ ^= 1u;
    ++draws_;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  /// Number of variates handed out so far.
  [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  unsigned lane_ = 0;
  std::uint64_t draws_ = 0;
};

}  // namespace zenolab
