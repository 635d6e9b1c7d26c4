#include "nbbox/rng.hpp"

#include <cmath>
#include <string>

#include "nbbox/error.hpp"

namespace nbbox {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  return mix64(state);
}

Xoshiro256StarStar Xoshiro256StarStar::from_seed(std::uint64_t seed) {
  State s;
  for (auto& word : s) word = splitmix64_next(seed);
  return Xoshiro256StarStar(s);
}

std::uint64_t Xoshiro256StarStar::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

RngStream::RngStream(std::uint64_t seed) : key_(seed), engine_(Xoshiro256StarStar::from_seed(seed)) {}

RngStream RngStream::substream(std::string_view label) const {
  // Bytes are folded little-endian, eight at a time, so the derived key is
  // identical on every platform.
  std::uint64_t h = mix64(key_ ^ 0x6a09e667f3bcc909ULL);
  std::size_t i = 0;
  while (i < label.size()) {
    std::uint64_t chunk = 0;
    for (int b = 0; b < 8 && i < label.size(); ++b, ++i) {
      chunk |= std::uint64_t{static_cast<unsigned char>(label[i])} << (8 * b);
    }
    h = mix64((h + 0x9e3779b97f4a7c15ULL) ^ chunk);
  }
  h = mix64(h ^ (std::uint64_t{label.size()} * 0xd1b54a32d192ed03ULL));
  return RngStream(h);
}

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t RngStream::rand_int(std::int64_t a, std::int64_t c) {
  if (a > c) {
    throw InvalidRange("rand_int requires a <= c, got [" + std::to_string(a) + ", " +
                       std::to_string(c) + "]");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(c) - static_cast<std::uint64_t>(a);
  std::uint64_t offset;
  if (span == ~std::uint64_t{0}) {
    offset = next_u64();
  } else {
    // Rejection sampling removes the modulo bias.
    const std::uint64_t n = span + 1;
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x < threshold);
    offset = x % n;
  }
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + offset);
}

double RngStream::rand_float(double a, double c) {
  if (!std::isfinite(a) || !std::isfinite(c) || !(a < c)) {
    throw InvalidRange("rand_float requires finite a < c, got [" + std::to_string(a) + ", " +
                       std::to_string(c) + ")");
  }
  const double x = a + next_unit() * (c - a);
  // a + u(c - a) can round up to c when u is within an ulp of 1.
  return x < c ? x : std::nextafter(c, a);
}

}  // namespace nbbox
