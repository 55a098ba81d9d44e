#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fourvertex {

/// Seeded 64-bit source. Draws are built from raw engine output so that a
/// given seed yields the same stream with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(std::seed_seq& seq) : engine_(seq) {}

  /// Seed derived from a master seed and a path of indices (chain, level, batch...).
  static Rng derived(std::uint64_t master, std::initializer_list<std::uint64_t> path);

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n), n >= 1, unbiased. Small ranges draw from
  /// buffered 32-bit halves of the engine output.
  std::uint64_t index(std::uint64_t n) {
    if (n <= (std::uint64_t{1} << 32)) {
      std::uint64_t m = std::uint64_t{next32()} * n;
      auto low = static_cast<std::uint32_t>(m);
      if (low < n) {
        const auto threshold = static_cast<std::uint32_t>((std::uint64_t{1} << 32) % n);
        while (low < threshold) {
          m = std::uint64_t{next32()} * n;
          low = static_cast<std::uint32_t>(m);
        }
      }
      return m >> 32;
    }
    return index_wide(n);
  }

  /// Fair bit, one engine call per 64 coins.
  bool coin() {
    if (coin_bits_ == 0) {
      coin_buffer_ = engine_();
      coin_bits_ = 64;
    }
    const bool b = coin_buffer_ & 1;
    coin_buffer_ >>= 1;
    --coin_bits_;
    return b;
  }

 private:
  std::uint32_t next32() {
    if (halves_ == 0) {
      half_buffer_ = engine_();
      halves_ = 2;
    }
    const auto v = static_cast<std::uint32_t>(half_buffer_);
    half_buffer_ >>= 32;
    --halves_;
    return v;
  }
  std::uint64_t index_wide(std::uint64_t n);

  std::mt19937_64 engine_;
  std::uint64_t coin_buffer_ = 0;
  std::uint64_t half_buffer_ = 0;
  int coin_bits_ = 0;
  int halves_ = 0;
};

}  // namespace fourvertex
