#pragma once

#include <bit>
#include <cstdint>
#include <string_view>

namespace lrv::seeds {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return splitmix64(seed ^ splitmix64(value + 0x632BE59BD9B4E019ULL));
}

inline std::uint64_t combine(std::uint64_t seed, double value) noexcept {
  return combine(seed, std::bit_cast<std::uint64_t>(value));
}

inline std::uint64_t combine(std::uint64_t seed, std::string_view value) noexcept {
  return combine(seed, fnv1a(value));
}

// Seed of replication i within a stream.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t i) noexcept { return combine(seed, i); }

}  // namespace lrv::seeds
