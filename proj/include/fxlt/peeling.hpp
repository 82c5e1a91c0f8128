#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fxlt/hashing.hpp"

namespace fxlt {

/// Constant-space multiset summary: XOR of member indices plus a count.
/// When the count is one, the accumulator is the sole member.
struct XorSet {
  std::uint32_t elems = 0;
  std::uint32_t cardinality = 0;

  void add(std::uint32_t keyIndex) noexcept {
    elems ^= keyIndex;
    ++cardinality;
  }
  void remove(std::uint32_t keyIndex) noexcept {
    elems ^= keyIndex;
    --cardinality;
  }
  std::optional<std::uint32_t> singleton() const noexcept {
    if (cardinality == 1) return elems;
    return std::nullopt;
  }

  friend bool operator==(const XorSet&, const XorSet&) = default;
};

/// One peeled key: the slot it was alone in and which of its hashes maps there.
struct PeelEntry {
  std::uint32_t keyIndex = 0;
  std::uint32_t slot = 0;
  std::uint32_t tau = 0;

  friend bool operator==(const PeelEntry&, const PeelEntry&) = default;
};

struct PeelResult {
  std::vector<PeelEntry> order;  // complete only when ok()
  std::size_t unpeeled = 0;
  std::size_t auxBytes = 0;      // scratch memory held at peak

  bool ok() const noexcept { return unpeeled == 0; }
};

/// Work counters for the linear peel.
struct PeelCounters {
  std::uint64_t setUpdates = 0;
  std::uint64_t queuePushes = 0;
  std::uint64_t queuePops = 0;

  std::uint64_t total() const noexcept { return setUpdates + queuePushes + queuePops; }
};

// A neighborhood source is any callable `Neighborhood(std::size_t keyIndex)`.
// Cached builds index a HashCache, uncached builds rehash the key.

/// Queue-driven peel. FIFO order, seeded with the initial singletons in slot
/// order; stale queue entries are skipped on pop.
template <class Source>
PeelResult peelLinear(std::size_t n, std::uint32_t m, std::uint32_t k, Source&& source,
                      PeelCounters* counters = nullptr) {
  PeelResult result;
  if (n == 0) return result;

  std::vector<XorSet> sets(m);
  for (std::size_t i = 0; i < n; ++i) {
    const Neighborhood nb = source(i);
    for (std::uint32_t j = 0; j < k; ++j) sets[nb.locations[j]].add(static_cast<std::uint32_t>(i));
  }
  if (counters) counters->setUpdates += static_cast<std::uint64_t>(n) * k;

  std::vector<std::uint32_t> queue;
  queue.reserve(m);
  for (std::uint32_t s = 0; s < m; ++s) {
    if (sets[s].cardinality == 1) queue.push_back(s);
  }
  if (counters) counters->queuePushes += queue.size();

  result.order.reserve(n);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t slot = queue[head];
    if (counters) ++counters->queuePops;
    const auto only = sets[slot].singleton();
    if (!only) continue;

    const std::uint32_t keyIndex = *only;
    const Neighborhood nb = source(keyIndex);
    std::uint32_t tau = 0;
    while (nb.locations[tau] != slot) ++tau;
    result.order.push_back({keyIndex, slot, tau});

    for (std::uint32_t j = 0; j < k; ++j) {
      XorSet& set = sets[nb.locations[j]];
      set.remove(keyIndex);
      if (set.cardinality == 1) {
        queue.push_back(nb.locations[j]);
        if (counters) ++counters->queuePushes;
      }
    }
    if (counters) counters->setUpdates += k;
  }

  result.unpeeled = n - result.order.size();
  result.auxBytes = sets.capacity() * sizeof(XorSet) + queue.capacity() * sizeof(std::uint32_t) +
                    result.order.capacity() * sizeof(PeelEntry);
  return result;
}

/// Round-based peel that rescans every unplaced key each round and emits all
/// keys that are alone in some slot. O(n) per round.
template <class Source>
PeelResult peelGreedyLegacy(std::size_t n, std::uint32_t m, std::uint32_t k, Source&& source) {
  PeelResult result;
  if (n == 0) return result;

  std::vector<XorSet> sets(m);
  std::vector<std::uint32_t> unplaced(n);
  for (std::size_t i = 0; i < n; ++i) unplaced[i] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> remaining;
  remaining.reserve(n);
  result.order.reserve(n);

  while (!unplaced.empty()) {
    for (const std::uint32_t i : unplaced) {
      const Neighborhood nb = source(i);
      for (std::uint32_t j = 0; j < k; ++j) sets[nb.locations[j]].add(i);
    }

    remaining.clear();
    for (const std::uint32_t i : unplaced) {
      const Neighborhood nb = source(i);
      std::uint32_t tau = k;
      for (std::uint32_t j = 0; j < k; ++j) {
        if (sets[nb.locations[j]].cardinality == 1) {
          tau = j;
          break;
        }
      }
      if (tau < k) {
        result.order.push_back({i, nb.locations[tau], tau});
      } else {
        remaining.push_back(i);
      }
    }

    for (const std::uint32_t i : unplaced) {
      const Neighborhood nb = source(i);
      for (std::uint32_t j = 0; j < k; ++j) sets[nb.locations[j]] = XorSet{};
    }

    if (remaining.size() == unplaced.size()) break;
    unplaced.swap(remaining);
  }

  result.unpeeled = n - result.order.size();
  result.auxBytes = sets.capacity() * sizeof(XorSet) +
                    (unplaced.capacity() + remaining.capacity()) * sizeof(std::uint32_t) +
                    result.order.capacity() * sizeof(PeelEntry);
  return result;
}

/// Replays `order` backwards: every entry's slot must be one of its own
/// locations (exactly once, at tau) and must not be a location of any entry
/// that follows it in the order.
template <class Source>
bool isValidPeelOrder(std::span<const PeelEntry> order, std::size_t n, std::uint32_t m,
                      std::uint32_t k, Source&& source) {
  if (order.size() != n) return false;
  std::vector<bool> seenKey(n, false);
  std::vector<bool> touched(m, false);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (it->keyIndex >= n || seenKey[it->keyIndex] || it->tau >= k) return false;
    seenKey[it->keyIndex] = true;
    const Neighborhood nb = source(it->keyIndex);
    if (nb.locations[it->tau] != it->slot) return false;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (j != it->tau && nb.locations[j] == it->slot) return false;
    }
    if (touched[it->slot]) return false;
    for (std::uint32_t j = 0; j < k; ++j) touched[nb.locations[j]] = true;
  }
  return true;
}

PeelResult peelLinear(std::span<const Neighborhood> neighborhoods, std::uint32_t m, std::uint32_t k,
                      PeelCounters* counters = nullptr);
PeelResult peelGreedyLegacy(std::span<const Neighborhood> neighborhoods, std::uint32_t m,
                            std::uint32_t k);
bool isValidPeelOrder(std::span<const PeelEntry> order, std::span<const Neighborhood> neighborhoods,
                      std::uint32_t m, std::uint32_t k);

}  // namespace fxlt
