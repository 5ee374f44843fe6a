#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). A stream is a key plus the two high counter
// words; the two low words count blocks, so streams never overlap.

#include <array>
#include <cstdint>

namespace parkfx {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint32_t stream_hi, std::uint32_t stream_lo) noexcept;

  std::uint32_t next_u32() noexcept;
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  double normal() noexcept;
  /// Log-normal variate with the given mean and coefficient of variation.
  double lognormal_mean_cv(double mean, double cv) noexcept;
  long long poisson(double lambda) noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace parkfx
