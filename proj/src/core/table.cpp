#include "fxlt/table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>
#include <utility>

#include "fxlt/error.hpp"

namespace fxlt {
namespace {

enum class PeelStrategy { Linear, GreedyLegacy };

void validateConfig(const BuildConfig& config) {
  if (config.k != 3 && config.k != 4) {
    throw Error(ErrorCode::InvalidArgument, "k must be 3 or 4");
  }
  if (config.q < 2 || config.q > 32) {
    throw Error(ErrorCode::InvalidArgument, "q must be in [2, 32]");
  }
  if (config.q < 32 && config.k >= (std::uint64_t{1} << config.q)) {
    throw Error(ErrorCode::InvalidArgument, "k must be smaller than 2^q");
  }
  if (!(config.c >= 1.0)) throw Error(ErrorCode::InvalidArgument, "c must be >= 1.0");
  if (config.maxRetries < 1) throw Error(ErrorCode::InvalidArgument, "maxRetries must be >= 1");
  if (config.valueWidth > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "valueWidth must fit in 16 bits");
  }
}

void validateInput(std::span<const std::string_view> keys, std::span<const std::string_view> values,
                   std::uint32_t valueWidth) {
  if (keys.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "key and value counts differ");
  }
  if (keys.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "too many keys");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != valueWidth) {
      throw Error(ErrorCode::InvalidArgument,
                  "value " + std::to_string(i) + " is not " + std::to_string(valueWidth) + " bytes");
    }
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!seen.insert(keys[i]).second) {
      throw Error(ErrorCode::DuplicateKey, "duplicate key at index " + std::to_string(i));
    }
  }
}

FilterParams baseParams(std::size_t n, const BuildConfig& config) {
  FilterParams p;
  p.n = n;
  p.k = config.k;
  p.q = config.q;
  p.c = config.c;
  p.coupled = config.coupled;
  if (config.coupled) {
    // An empty build still needs one valid window for lookups.
    const SegmentGeometry g = segmentGeometry(std::max<std::uint64_t>(n, 1), config.k, config.c);
    p.w = g.w;
    p.numSegments = g.numSegments;
    p.m = g.m;
  } else {
    p.m = plainSlotCount(n, config.k, config.c);
  }
  return p;
}

template <class Source>
PeelResult runPeel(PeelStrategy strategy, std::size_t n, const FilterParams& p, Source&& source) {
  if (strategy == PeelStrategy::Linear) return peelLinear(n, p.m, p.k, source);
  return peelGreedyLegacy(n, p.m, p.k, source);
}

Fxlt buildWith(PeelStrategy strategy, std::span<const std::string_view> keys,
               std::span<const std::string_view> values, const BuildConfig& config,
               BuildStats* stats) {
  validateConfig(config);
  validateInput(keys, values, config.valueWidth);

  const std::size_t n = keys.size();
  FilterParams params = baseParams(n, config);
  BuildStats local;

  for (std::uint32_t attempt = 0; attempt < config.maxRetries; ++attempt) {
    params.masterSeed = config.masterSeed ^ attempt;
    params.seeds = deriveSeeds(params.masterSeed, params.k + 2);
    ++local.attempts;

    std::optional<SlotTables> tables;
    std::size_t aux = 0;
    if (config.cacheHashes) {
      const HashCache cache = buildHashCache(keys, params);
      auto source = [&](std::size_t i) { return cache.perKey[i]; };
      PeelResult peel = runPeel(strategy, n, params, source);
      aux = peel.auxBytes + cache.perKey.capacity() * sizeof(Neighborhood);
      if (peel.ok()) {
        tables = assign(std::span<const PeelEntry>(peel.order), source, values, params.m, params.q,
                        params.k, config.valueWidth);
      }
    } else {
      auto source = [&](std::size_t i) { return neighborhood(keys[i], params); };
      PeelResult peel = runPeel(strategy, n, params, source);
      aux = peel.auxBytes;
      if (peel.ok()) {
        tables = assign(std::span<const PeelEntry>(peel.order), source, values, params.m, params.q,
                        params.k, config.valueWidth);
      }
    }
    local.peakAuxBytes = std::max(local.peakAuxBytes, aux);

    if (tables) {
      if (stats) *stats = local;
      return Fxlt(std::move(params), config.valueWidth, std::move(*tables));
    }
  }

  if (stats) *stats = local;
  throw Error(ErrorCode::BuildExhausted,
              "build exhausted after " + std::to_string(config.maxRetries) +
                  " attempts (n=" + std::to_string(n) + ", c=" + std::to_string(config.c) + ")");
}

}  // namespace

IndexTable::IndexTable(std::uint32_t slots, std::uint32_t q)
    : slots_(slots), width_((q + 7) / 8), bytes_(std::size_t{slots} * ((q + 7) / 8), 0) {}

Fxlt::Fxlt(FilterParams params, std::uint32_t valueWidth, SlotTables tables)
    : params_(std::move(params)), valueWidth_(valueWidth), tables_(std::move(tables)) {}

LookupResult Fxlt::lookup(std::string_view key) const noexcept {
  const Neighborhood nb = neighborhood(key, params_);
  std::uint32_t d = nb.mValue;
  for (std::uint32_t j = 0; j < params_.k; ++j) d ^= tables_.index.get(nb.locations[j]);
  d &= params_.mMask();
  if (d >= params_.k) return {};
  const std::size_t offset = std::size_t{nb.locations[d]} * valueWidth_;
  return {true, std::span<const std::uint8_t>(tables_.values).subspan(offset, valueWidth_)};
}

Fxlt build(std::span<const std::string_view> keys, std::span<const std::string_view> values,
           const BuildConfig& config, BuildStats* stats) {
  return buildWith(PeelStrategy::Linear, keys, values, config, stats);
}

Fxlt buildLegacy(std::span<const std::string_view> keys, std::span<const std::string_view> values,
                 const BuildConfig& config, BuildStats* stats) {
  return buildWith(PeelStrategy::GreedyLegacy, keys, values, config, stats);
}

double fprTheoretical(std::uint32_t k, std::uint32_t q) {
  if (q < 32 && k >= (std::uint64_t{1} << q)) {
    throw Error(ErrorCode::InvalidArgument, "k must be smaller than 2^q");
  }
  return static_cast<double>(k) * std::ldexp(1.0, -static_cast<int>(q));
}

Footprint memoryFootprint(const Fxlt& filter) noexcept {
  const FilterParams& p = filter.params();
  Footprint f;
  f.coreBytes = std::uint64_t{p.m} * ((p.q + 7) / 8) + std::uint64_t{p.m} * filter.valueWidth();
  if (p.n > 0) f.slotsPerKey = static_cast<double>(p.m) / static_cast<double>(p.n);
  return f;
}

}  // namespace fxlt
