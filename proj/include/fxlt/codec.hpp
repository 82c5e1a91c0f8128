#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fxlt/table.hpp"

namespace fxlt {

// File format v1, all integers little-endian:
//
//   magic "FXLT" | version u8 | flags u8 (bit0 coupled) | k u8 | q u8 |
//   valueWidth u16 | w u64 | numSegments u64 | m u64 | n u64 | masterSeed u64 |
//   seedCount u8 | seeds u32 x seedCount | headerCrc u32
//   index table  m x ceil(q/8) bytes
//   value table  m x valueWidth bytes
//   bodyCrc u32 (CRC32 of both tables)

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kFixedHeaderBytes = 51;

inline constexpr std::size_t headerSize(std::uint32_t k) noexcept {
  return kFixedHeaderBytes + 4 * (std::size_t{k} + 2) + 4;
}

std::size_t serializedSize(const Fxlt& filter) noexcept;

std::vector<std::uint8_t> serialize(const Fxlt& filter);

/// Throws Error with BadMagic, UnsupportedVersion, CorruptHeader,
/// CorruptBody or InconsistentGeometry.
Fxlt deserialize(std::span<const std::uint8_t> bytes);

}  // namespace fxlt
