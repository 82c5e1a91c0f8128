#include "fxlt/peeling.hpp"

namespace fxlt {

PeelResult peelLinear(std::span<const Neighborhood> neighborhoods, std::uint32_t m, std::uint32_t k,
                      PeelCounters* counters) {
  return peelLinear(
      neighborhoods.size(), m, k, [&](std::size_t i) { return neighborhoods[i]; }, counters);
}

PeelResult peelGreedyLegacy(std::span<const Neighborhood> neighborhoods, std::uint32_t m,
                            std::uint32_t k) {
  return peelGreedyLegacy(neighborhoods.size(), m, k,
                          [&](std::size_t i) { return neighborhoods[i]; });
}

bool isValidPeelOrder(std::span<const PeelEntry> order, std::span<const Neighborhood> neighborhoods,
                      std::uint32_t m, std::uint32_t k) {
  return isValidPeelOrder(order, neighborhoods.size(), m, k,
                          [&](std::size_t i) { return neighborhoods[i]; });
}

}  // namespace fxlt
