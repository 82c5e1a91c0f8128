#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fxlt {

/// Largest supported number of location hashes per key.
inline constexpr std::uint32_t kMaxHashes = 4;

/// Build-time constants of one filter. Seeds are the concrete per-attempt
/// seeds; `masterSeed` is the value they were derived from.
struct FilterParams {
  std::uint64_t n = 0;
  std::uint32_t k = 3;
  std::uint32_t q = 8;
  double c = 1.0;
  std::uint32_t w = 0;            // 0 when not coupled
  std::uint32_t numSegments = 0;  // 0 when not coupled
  std::uint32_t m = 0;
  std::vector<std::uint32_t> seeds;  // k location seeds, M seed, segment seed
  bool coupled = true;
  std::uint64_t masterSeed = 0;

  std::uint32_t mMask() const noexcept {
    return q >= 32 ? 0xFFFFFFFFu : ((std::uint32_t{1} << q) - 1u);
  }
};

/// The k slot indices of one key plus its q-bit randomizer.
struct Neighborhood {
  std::array<std::uint32_t, kMaxHashes> locations{};
  std::uint32_t mValue = 0;

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

struct SegmentGeometry {
  std::uint32_t w = 0;
  std::uint32_t numSegments = 0;
  std::uint32_t m = 0;
};

/// MurmurHash3 x86_32.
std::uint32_t seededHash(std::span<const std::byte> key, std::uint32_t seed) noexcept;

inline std::uint32_t seededHash(std::string_view key, std::uint32_t seed) noexcept {
  return seededHash(std::as_bytes(std::span(key.data(), key.size())), seed);
}

/// Pairwise-distinct seeds drawn from a splitmix64 stream.
std::vector<std::uint32_t> deriveSeeds(std::uint64_t masterSeed, std::size_t count);

/// Segment size and count for a spatially coupled table. Throws
/// InvalidArgument for k outside {3, 4}, n == 0 or c < 1.
SegmentGeometry segmentGeometry(std::uint64_t n, std::uint32_t k, double c);

/// Slot count of a non-coupled table: max(k, ceil(c * n)).
std::uint32_t plainSlotCount(std::uint64_t n, std::uint32_t k, double c);

Neighborhood neighborhoodPlain(std::string_view key, const FilterParams& params) noexcept;
Neighborhood neighborhoodCoupled(std::string_view key, const FilterParams& params) noexcept;

inline Neighborhood neighborhood(std::string_view key, const FilterParams& params) noexcept {
  return params.coupled ? neighborhoodCoupled(key, params) : neighborhoodPlain(key, params);
}

/// Per-key neighborhoods, computed once so construction never rehashes.
struct HashCache {
  std::vector<Neighborhood> perKey;
};

HashCache buildHashCache(std::span<const std::string_view> keys, const FilterParams& params);

}  // namespace fxlt
