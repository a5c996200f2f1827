#pragma once

#include <cstdint>
#include <random>

namespace ambsee {

/// Independent stream purposes. Each (seed, index, purpose, attempt) tuple
/// maps to its own engine so that results never depend on evaluation order.
enum class Stream : std::uint32_t { Geometry = 1, Swarm = 2, CsiError = 3 };

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index, Stream purpose,
                                   std::uint64_t attempt = 0) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed),  hi(seed),    lo(index), hi(index), static_cast<std::uint32_t>(purpose),
                    lo(attempt), hi(attempt)};
  return std::mt19937_64(seq);
}

}  // namespace ambsee
