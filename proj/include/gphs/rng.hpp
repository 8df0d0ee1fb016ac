#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace gphs {

/// Philox4x32-10 block function (counter-based, splittable by construction).
/// key = (seed, domain), counter = 128-bit index. Every random quantity in the
/// library is addressed as (seed, domain, index), so generation order, chunking
/// and thread count cannot change the stream.
inline std::array<std::uint32_t, 4> philox4x32(std::uint64_t key_lo, std::uint64_t key_hi,
                                               std::uint64_t ctr_lo, std::uint64_t ctr_hi) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key_lo ^ (key_lo >> 32));
  std::uint32_t k1 = static_cast<std::uint32_t>(key_hi ^ (key_hi >> 32));
  // mix the full 64-bit keys into the 32-bit key words
  k0 ^= static_cast<std::uint32_t>(key_hi);
  k1 ^= static_cast<std::uint32_t>(key_lo >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
    std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += W0;
    k1 += W1;
  }
  return {c0, c1, c2, c3};
}

/// Deterministic scalar streams over (seed, domain). Index-addressed: the
/// caller names which uniform/normal it wants and always gets the same value.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t domain) : seed_(seed), domain_(domain) {}

  /// Uniform on (0,1), strictly inside the interval.
  double uniform(std::uint64_t index) const {
    auto b = philox4x32(seed_, domain_, index, 0);
    std::uint64_t u = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on one Philox block per pair.
  double normal(std::uint64_t index) const {
    auto b = philox4x32(seed_, domain_, index >> 1, 1);
    std::uint64_t u0 = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    std::uint64_t u1 = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    double r = std::sqrt(-2.0 * std::log((static_cast<double>(u0 >> 11) + 0.5) * 0x1.0p-53));
    double th = 6.283185307179586476925287 * ((static_cast<double>(u1 >> 11) + 0.5) * 0x1.0p-53);
    return (index & 1) ? r * std::sin(th) : r * std::cos(th);
  }

  void fill_normals(std::uint64_t start, double* out, std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) out[i] = normal(start + i);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t domain() const { return domain_; }

 private:
  std::uint64_t seed_, domain_;
};

/// Fixed domain tags so independent draws never share a stream.
enum class RngDomain : std::uint64_t {
  train = 1,
  valid = 2,
  test = 3,
  cover = 4,
  averaging_mc = 5,
  label_noise = 6,
  misc = 7,
};

inline RandomStream stream(std::uint64_t seed, RngDomain domain) {
  return RandomStream(seed, static_cast<std::uint64_t>(domain));
}

}  // namespace gphs
