#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace nbbox {

/// SplitMix64 step: advances `state` and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// The SplitMix64 output finalizer (a bijection on 64-bit words).
std::uint64_t mix64(std::uint64_t z);

/// xoshiro256** 1.0 (Blackman & Vigna).
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;
  using State = std::array<std::uint64_t, 4>;

  explicit Xoshiro256StarStar(const State& state) : s_(state) {}

  /// State filled from a SplitMix64 sequence started at `seed`.
  static Xoshiro256StarStar from_seed(std::uint64_t seed);

  std::uint64_t operator()();

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }
  const State& state() const { return s_; }

 private:
  State s_;
};

/// Deterministic uniform random source. The output sequence depends only on
/// the 64-bit key the stream was created with, on every platform.
///
/// Streams are move-only so that sharing state is always explicit: use
/// clone() to replay a sequence and substream() to derive an independent
/// child keyed by (key, label).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  RngStream(RngStream&&) noexcept = default;
  RngStream& operator=(RngStream&&) noexcept = default;
  RngStream& operator=(const RngStream&) = delete;

  /// Copy including the current position.
  RngStream clone() const { return RngStream(key_, engine_); }

  /// Child stream keyed by a hash of (key(), label). Does not advance this
  /// stream, and the result does not depend on how far it has advanced.
  RngStream substream(std::string_view label) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  /// 53-bit uniform in [0, 1).
  double next_unit();

  /// Uniform integer in [a, c]. Throws InvalidRange if a > c.
  std::int64_t rand_int(std::int64_t a, std::int64_t c);

  /// Uniform real in [a, c). Throws InvalidRange unless a < c and both are
  /// finite.
  double rand_float(double a, double c);

 private:
  RngStream(const RngStream&) = delete;
  RngStream(std::uint64_t key, const Xoshiro256StarStar& engine) : key_(key), engine_(engine) {}

  std::uint64_t key_;
  Xoshiro256StarStar engine_;
};

}  // namespace nbbox
