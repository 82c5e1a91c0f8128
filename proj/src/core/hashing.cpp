#include "fxlt/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fxlt/error.hpp"

namespace fxlt {
namespace {

constexpr std::uint32_t rotl32(std::uint32_t x, int r) noexcept {
  return (x << r) | (x >> (32 - r));
}

constexpr std::uint32_t fmix32(std::uint32_t h) noexcept {
  h ^= h >> 16;
  h *= 0x85ebca6bu;
  h ^= h >> 13;
  h *= 0xc2b2ae35u;
  h ^= h >> 16;
  return h;
}

inline std::uint32_t loadLe32(const std::byte* p) noexcept {
  return std::to_integer<std::uint32_t>(p[0]) | (std::to_integer<std::uint32_t>(p[1]) << 8) |
         (std::to_integer<std::uint32_t>(p[2]) << 16) |
         (std::to_integer<std::uint32_t>(p[3]) << 24);
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// ceil(c * n) without the one-slot overshoot from products like 1.12 * 1e4
// evaluating to 11200.000000000002.
double slotsFor(double c, std::uint64_t n) {
  return std::ceil(c * static_cast<double>(n) * (1.0 - 1e-12));
}

std::uint32_t checkedSlotCount(double slots) {
  if (!(slots <= static_cast<double>(std::numeric_limits<std::uint32_t>::max()))) {
    throw Error(ErrorCode::InvalidArgument, "slot count exceeds 2^32 - 1");
  }
  return static_cast<std::uint32_t>(slots);
}

}  // namespace

std::uint32_t seededHash(std::span<const std::byte> key, std::uint32_t seed) noexcept {
  constexpr std::uint32_t c1 = 0xcc9e2d51u;
  constexpr std::uint32_t c2 = 0x1b873593u;

  const std::size_t len = key.size();
  const std::size_t nblocks = len / 4;
  std::uint32_t h1 = seed;

  const std::byte* data = key.data();
  for (std::size_t i = 0; i < nblocks; ++i) {
    std::uint32_t k1 = loadLe32(data + i * 4);
    k1 *= c1;
    k1 = rotl32(k1, 15);
    k1 *= c2;
    h1 ^= k1;
    h1 = rotl32(h1, 13);
    h1 = h1 * 5 + 0xe6546b64u;
  }

  const std::byte* tail = data + nblocks * 4;
  std::uint32_t k1 = 0;
  switch (len & 3u) {
    case 3:
      k1 ^= std::to_integer<std::uint32_t>(tail[2]) << 16;
      [[fallthrough]];
    case 2:
      k1 ^= std::to_integer<std::uint32_t>(tail[1]) << 8;
      [[fallthrough]];
    case 1:
      k1 ^= std::to_integer<std::uint32_t>(tail[0]);
      k1 *= c1;
      k1 = rotl32(k1, 15);
      k1 *= c2;
      h1 ^= k1;
  }

  h1 ^= static_cast<std::uint32_t>(len);
  return fmix32(h1);
}

std::vector<std::uint32_t> deriveSeeds(std::uint64_t masterSeed, std::size_t count) {
  std::vector<std::uint32_t> seeds;
  seeds.reserve(count);
  std::uint64_t state = masterSeed;
  while (seeds.size() < count) {
    const auto candidate = static_cast<std::uint32_t>(splitmix64(state) >> 32);
    if (std::find(seeds.begin(), seeds.end(), candidate) == seeds.end()) {
      seeds.push_back(candidate);
    }
  }
  return seeds;
}

SegmentGeometry segmentGeometry(std::uint64_t n, std::uint32_t k, double c) {
  if (k != 3 && k != 4) {
    throw Error(ErrorCode::InvalidArgument, "k must be 3 or 4, got " + std::to_string(k));
  }
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "segment geometry needs n >= 1");
  if (!(c >= 1.0)) throw Error(ErrorCode::InvalidArgument, "c must be >= 1.0");

  const double nd = static_cast<double>(n);
  const double raw = (k == 3) ? 4.8 * std::pow(nd, 0.58) : 0.7 * std::pow(nd, 0.65);
  const double w = std::max(1.0, std::round(raw));
  const double wanted = slotsFor(c, n);
  const double segments = std::max<double>(k, std::ceil(wanted / w));

  SegmentGeometry g;
  g.w = checkedSlotCount(w);
  g.numSegments = checkedSlotCount(segments);
  g.m = checkedSlotCount(segments * w);
  return g;
}

std::uint32_t plainSlotCount(std::uint64_t n, std::uint32_t k, double c) {
  if (!(c >= 1.0)) throw Error(ErrorCode::InvalidArgument, "c must be >= 1.0");
  return checkedSlotCount(std::max<double>(k, slotsFor(c, n)));
}

Neighborhood neighborhoodPlain(std::string_view key, const FilterParams& params) noexcept {
  Neighborhood nb;
  for (std::uint32_t i = 0; i < params.k; ++i) {
    nb.locations[i] = seededHash(key, params.seeds[i]) % params.m;
  }
  nb.mValue = seededHash(key, params.seeds[params.k]) & params.mMask();
  return nb;
}

Neighborhood neighborhoodCoupled(std::string_view key, const FilterParams& params) noexcept {
  const std::uint32_t k = params.k;
  const std::uint32_t windows = params.numSegments - k + 1;
  const std::uint32_t firstSegment = seededHash(key, params.seeds[k + 1]) % windows;
  const std::uint32_t firstStart = firstSegment * params.w;

  Neighborhood nb;
  for (std::uint32_t i = 0; i < k; ++i) {
    const std::uint32_t segmentStart = firstStart + i * params.w;
    nb.locations[i] = segmentStart + seededHash(key, params.seeds[i]) % params.w;
  }
  nb.mValue = seededHash(key, params.seeds[k]) & params.mMask();
  return nb;
}

HashCache buildHashCache(std::span<const std::string_view> keys, const FilterParams& params) {
  HashCache cache;
  cache.perKey.reserve(keys.size());
  for (const auto key : keys) cache.perKey.push_back(neighborhood(key, params));
  return cache;
}

const char* errorCodeName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::BuildExhausted: return "BuildExhausted";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::CorruptBody: return "CorruptBody";
    case ErrorCode::InconsistentGeometry: return "InconsistentGeometry";
  }
  return "Unknown";
}

}  // namespace fxlt
