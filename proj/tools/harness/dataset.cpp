#include "harness/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace fxlt::harness {
namespace {

int hexDigit(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

std::string lineMsg(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::string parseValue(std::string_view field, std::uint32_t width, std::size_t line) {
  if (field.starts_with("0x") || field.starts_with("0X")) {
    const std::string_view digits = field.substr(2);
    if (digits.size() % 2 != 0) {
      throw DataError(DataErrorKind::Parse, line, lineMsg(line, "odd number of hex digits"));
    }
    if (digits.size() / 2 != width) {
      throw DataError(DataErrorKind::ValueWidthMismatch, line,
                      lineMsg(line, "hex value is not " + std::to_string(width) + " bytes"));
    }
    std::string out(width, '\0');
    for (std::size_t i = 0; i < width; ++i) {
      const int hi = hexDigit(digits[2 * i]);
      const int lo = hexDigit(digits[2 * i + 1]);
      if (hi < 0 || lo < 0) throw DataError(DataErrorKind::Parse, line, lineMsg(line, "bad hex digit"));
      out[i] = static_cast<char>(hi * 16 + lo);
    }
    return out;
  }

  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec == std::errc::invalid_argument || end != field.data() + field.size()) {
    throw DataError(DataErrorKind::Parse, line, lineMsg(line, "value is not an unsigned integer"));
  }
  if (ec == std::errc::result_out_of_range ||
      (width < 8 && value >= (std::uint64_t{1} << (8 * width)))) {
    throw DataError(DataErrorKind::ValueWidthMismatch, line,
                    lineMsg(line, "value does not fit in " + std::to_string(width) + " bytes"));
  }
  return encodeLe(value, width);
}

}  // namespace

std::string encodeLe(std::uint64_t value, std::uint32_t width) {
  std::string out(width, '\0');
  for (std::uint32_t b = 0; b < width && b < 8; ++b) {
    out[b] = static_cast<char>((value >> (8 * b)) & 0xFF);
  }
  return out;
}

KvDataset parseTsv(std::string_view text, std::uint32_t valueWidth, std::string sourcePath) {
  KvDataset data;
  data.sourcePath = std::move(sourcePath);
  std::unordered_set<std::string_view> seen;

  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const std::size_t eol = text.find('\n');
    std::string_view row = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (row.ends_with('\r')) row.remove_suffix(1);

    const std::size_t tab = row.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(DataErrorKind::Parse, line, lineMsg(line, "expected key<TAB>value"));
    }
    const std::string_view key = row.substr(0, tab);
    if (!seen.insert(key).second) {
      throw DataError(DataErrorKind::DuplicateKey, line,
                      lineMsg(line, "duplicate key '" + std::string(key) + "'"));
    }
    data.keys.emplace_back(key);
    data.values.push_back(parseValue(row.substr(tab + 1), valueWidth, line));
  }
  return data;
}

KvDataset ingestTsv(const std::string& path, std::uint32_t valueWidth) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DataError(DataErrorKind::Io, 0, "cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  if (file.bad()) throw DataError(DataErrorKind::Io, 0, "read failed: " + path);
  const std::string text = buffer.str();
  // parseTsv keys are views into `text`; they are copied into the dataset.
  return parseTsv(text, valueWidth, path);
}

std::string formatValue(std::span<const std::uint8_t> value) {
  if (value.size() <= 8) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < value.size(); ++b) v |= std::uint64_t{value[b]} << (8 * b);
    return std::to_string(v);
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "0x";
  for (const std::uint8_t byte : value) {
    out.push_back(kHex[byte >> 4]);
    out.push_back(kHex[byte & 0xF]);
  }
  return out;
}

}  // namespace fxlt::harness
