#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace ogd {

// Philox4x32-10 counter-based bijection (Salmon et al., SC'11). Pure
// function of (counter, key); no hidden state.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) noexcept;
};

// A reproducible random stream identified by (seed, stream id). The n-th
// 64-bit draw is a fixed function of (seed, stream, n), so streams handed to
// different workers never overlap and do not depend on scheduling.
//
// Satisfies std::uniform_random_bit_generator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  // Standard normal via Box-Muller; caches the second variate.
  double normal() noexcept;

  // Fills `out` with a point drawn uniformly from the unit sphere.
  void unit_sphere(std::span<double> out) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  // Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return block_ * 2 + used_ - 2; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned used_ = 2;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ogd
