#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fxlt/hashing.hpp"
#include "fxlt/peeling.hpp"

namespace fxlt {

/// m slots of q-bit values, each stored little-endian in ceil(q/8) bytes.
class IndexTable {
 public:
  IndexTable() = default;
  IndexTable(std::uint32_t slots, std::uint32_t q);

  std::uint32_t get(std::uint32_t slot) const noexcept {
    const std::uint8_t* p = bytes_.data() + static_cast<std::size_t>(slot) * width_;
    if (width_ == 1) return p[0];
    std::uint32_t v = 0;
    for (std::uint32_t b = 0; b < width_; ++b) v |= std::uint32_t{p[b]} << (8 * b);
    return v;
  }

  void set(std::uint32_t slot, std::uint32_t value) noexcept {
    std::uint8_t* p = bytes_.data() + static_cast<std::size_t>(slot) * width_;
    for (std::uint32_t b = 0; b < width_; ++b) p[b] = static_cast<std::uint8_t>(value >> (8 * b));
  }

  std::uint32_t bytesPerSlot() const noexcept { return width_; }
  std::uint32_t size() const noexcept { return slots_; }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::span<std::uint8_t> bytes() noexcept { return bytes_; }

 private:
  std::uint32_t slots_ = 0;
  std::uint32_t width_ = 1;
  std::vector<std::uint8_t> bytes_;
};

struct SlotTables {
  IndexTable index;
  std::vector<std::uint8_t> values;  // m * valueWidth bytes
};

struct LookupResult {
  bool found = false;
  std::span<const std::uint8_t> value;  // empty unless found
};

struct BuildConfig {
  std::uint32_t k = 3;
  std::uint32_t q = 8;
  double c = 1.15;
  bool coupled = true;
  bool cacheHashes = false;
  std::uint32_t valueWidth = 8;
  std::uint64_t masterSeed = 0;
  std::uint32_t maxRetries = 100;
};

struct BuildStats {
  std::uint32_t attempts = 0;
  std::size_t peakAuxBytes = 0;
};

struct Footprint {
  std::uint64_t coreBytes = 0;
  std::optional<double> slotsPerKey;  // absent for an empty filter
};

/// A built, immutable filter. Lookups are safe from any number of threads.
class Fxlt {
 public:
  Fxlt(FilterParams params, std::uint32_t valueWidth, SlotTables tables);

  LookupResult lookup(std::string_view key) const noexcept;

  const FilterParams& params() const noexcept { return params_; }
  std::uint32_t valueWidth() const noexcept { return valueWidth_; }
  const IndexTable& indexTable() const noexcept { return tables_.index; }
  std::span<const std::uint8_t> valueTable() const noexcept { return tables_.values; }

 private:
  FilterParams params_;
  std::uint32_t valueWidth_;
  SlotTables tables_;
};

/// Fills both tables in reverse peel order so each key decodes to its tau.
template <class Source>
SlotTables assign(std::span<const PeelEntry> order, Source&& source,
                  std::span<const std::string_view> values, std::uint32_t m, std::uint32_t q,
                  std::uint32_t k, std::uint32_t valueWidth) {
  SlotTables tables{IndexTable(m, q), std::vector<std::uint8_t>(std::size_t{m} * valueWidth, 0)};
  const std::uint32_t mask = q >= 32 ? 0xFFFFFFFFu : ((std::uint32_t{1} << q) - 1u);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Neighborhood nb = source(it->keyIndex);
    std::uint32_t cell = it->tau ^ nb.mValue;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (j != it->tau) cell ^= tables.index.get(nb.locations[j]);
    }
    tables.index.set(it->slot, cell & mask);
    const std::string_view v = values[it->keyIndex];
    std::copy(v.begin(), v.end(), tables.values.begin() + std::size_t{it->slot} * valueWidth);
  }
  return tables;
}

/// Linear (queue-driven) construction with seed retries.
Fxlt build(std::span<const std::string_view> keys, std::span<const std::string_view> values,
           const BuildConfig& config, BuildStats* stats = nullptr);

/// Same contract as build() but peels with the round-based legacy algorithm.
Fxlt buildLegacy(std::span<const std::string_view> keys, std::span<const std::string_view> values,
                 const BuildConfig& config, BuildStats* stats = nullptr);

/// k * 2^-q. Throws InvalidArgument when k >= 2^q.
double fprTheoretical(std::uint32_t k, std::uint32_t q);

Footprint memoryFootprint(const Fxlt& filter) noexcept;

}  // namespace fxlt
