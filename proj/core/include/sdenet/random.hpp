#pragma once

// Deterministic random streams. Philox4x32-10 gives counter-addressable
// normals for the path simulator; the seeded mt19937_64 streams serve weight
// initialization and dataset sampling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sdenet {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Salmon, Moraes, Dror, Shaw (SC'11), 10 rounds.
constexpr std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) noexcept {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
    ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
           std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

// (0, 1]: never zero, so log() in Box-Muller is safe.
inline double open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// [0, 1)
inline double half_open_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Two independent standard normals addressed by (seed, path, step, block).
inline std::array<double, 2> philox_normal_pair(std::uint64_t seed, std::uint64_t path,
                                                std::uint32_t step, std::uint32_t block) noexcept {
  const auto out = philox4x32({step, block, std::uint32_t(path), std::uint32_t(path >> 32)},
                              {std::uint32_t(seed), std::uint32_t(seed >> 32)});
  const double u1 = open_unit((std::uint64_t(out[0]) << 32) | out[1]);
  const double u2 = half_open_unit((std::uint64_t(out[2]) << 32) | out[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Seeded 64-bit engine for stream `stream` of `seed`.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

// Uniform [lo, hi) from a 64-bit engine, independent of the standard
// library's distribution implementation.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * half_open_unit(rng());
}

}  // namespace sdenet
