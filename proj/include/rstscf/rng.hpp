#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace rstscf {

/// Reproducible random stream: xoshiro256** seeded through SplitMix64 from a
/// (seed, stream) pair. The same pair yields the same sequence on every platform.
///
/// Satisfies UniformRandomBitGenerator. A stream is single-owner; hand each worker
/// its own via `derive`.
class RngStream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kAlgorithm = "xoshiro256**";

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::string_view algorithm() const noexcept { return kAlgorithm; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

  /// Standard normal variate (Marsaglia polar method; the second value of each pair is kept).
  double normal() noexcept;

  /// Independent child stream with the same seed and a stream index mixed from this
  /// stream's index and `index`.
  RngStream derive(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Bijective 64-bit finalizer (SplitMix64).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Combines two stream keys into one stream index.
std::uint64_t combine_stream(std::uint64_t a, std::uint64_t b) noexcept;

/// Stable 64-bit key for a name (FNV-1a), used to give named consumers their own stream.
std::uint64_t stream_key(std::string_view name) noexcept;

}  // namespace rstscf
