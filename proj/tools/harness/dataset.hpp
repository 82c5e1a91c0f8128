#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fxlt::harness {

enum class DataErrorKind { Io, Parse, DuplicateKey, ValueWidthMismatch };

class DataError : public std::runtime_error {
 public:
  DataError(DataErrorKind kind, std::size_t line, const std::string& what)
      : std::runtime_error(what), kind_(kind), line_(line) {}

  DataErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }  // 1-based, 0 when not line-specific

 private:
  DataErrorKind kind_;
  std::size_t line_;
};

struct KvDataset {
  std::vector<std::string> keys;
  std::vector<std::string> values;  // each exactly valueWidth bytes
  std::string sourcePath;
};

/// Parses `key<TAB>value` lines. Values are unsigned decimal (stored
/// little-endian in valueWidth bytes) or `0x` hex of exactly valueWidth bytes.
KvDataset ingestTsv(const std::string& path, std::uint32_t valueWidth);
KvDataset parseTsv(std::string_view text, std::uint32_t valueWidth, std::string sourcePath = {});

/// Decimal for widths up to 8 bytes, `0x` hex otherwise.
std::string formatValue(std::span<const std::uint8_t> value);

std::string encodeLe(std::uint64_t value, std::uint32_t width);

}  // namespace fxlt::harness
