#include "fxlt/codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>

#include "fxlt/error.hpp"

namespace fxlt {
namespace {

std::uint32_t crc(std::span<const std::uint8_t> bytes) {
  uLong value = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths.
  while (!bytes.empty()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size(), 1u << 30);
    value = crc32(value, bytes.data(), static_cast<uInt>(chunk));
    bytes = bytes.subspan(chunk);
  }
  return static_cast<std::uint32_t>(value);
}

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  template <class T>
  void le(T value) {
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      out_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * b)));
    }
  }
  void raw(std::span<const std::uint8_t> bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <class T>
  T le() {
    T value = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      value |= static_cast<T>(static_cast<T>(bytes_[pos_ + b]) << (8 * b));
    }
    pos_ += sizeof(T);
    return value;
  }
  std::size_t pos() const noexcept { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace

std::size_t serializedSize(const Fxlt& filter) noexcept {
  const FilterParams& p = filter.params();
  return headerSize(p.k) + filter.indexTable().bytes().size() + filter.valueTable().size() + 4;
}

std::vector<std::uint8_t> serialize(const Fxlt& filter) {
  const FilterParams& p = filter.params();
  std::vector<std::uint8_t> out;
  out.reserve(serializedSize(filter));
  Writer w(out);

  w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("FXLT"), 4));
  w.le<std::uint8_t>(kFormatVersion);
  w.le<std::uint8_t>(p.coupled ? 1 : 0);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(p.k));
  w.le<std::uint8_t>(static_cast<std::uint8_t>(p.q));
  w.le<std::uint16_t>(static_cast<std::uint16_t>(filter.valueWidth()));
  w.le<std::uint64_t>(p.w);
  w.le<std::uint64_t>(p.numSegments);
  w.le<std::uint64_t>(p.m);
  w.le<std::uint64_t>(p.n);
  w.le<std::uint64_t>(p.masterSeed);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(p.seeds.size()));
  for (const std::uint32_t s : p.seeds) w.le<std::uint32_t>(s);
  w.le<std::uint32_t>(crc(out));

  const std::size_t bodyStart = out.size();
  w.raw(filter.indexTable().bytes());
  w.raw(filter.valueTable());
  w.le<std::uint32_t>(crc(std::span<const std::uint8_t>(out).subspan(bodyStart)));
  return out;
}

Fxlt deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "FXLT", 4) != 0) {
    fail(ErrorCode::BadMagic, "not an FXLT file");
  }
  if (bytes.size() < kFixedHeaderBytes) fail(ErrorCode::CorruptHeader, "truncated header");

  Reader r(bytes.subspan(4));
  const auto version = r.le<std::uint8_t>();
  if (version != kFormatVersion) {
    fail(ErrorCode::UnsupportedVersion, "unsupported format version " + std::to_string(version));
  }
  const auto flags = r.le<std::uint8_t>();
  const auto k = r.le<std::uint8_t>();
  const auto q = r.le<std::uint8_t>();
  const auto valueWidth = r.le<std::uint16_t>();
  const auto w = r.le<std::uint64_t>();
  const auto numSegments = r.le<std::uint64_t>();
  const auto m = r.le<std::uint64_t>();
  const auto n = r.le<std::uint64_t>();
  const auto masterSeed = r.le<std::uint64_t>();
  const auto seedCount = r.le<std::uint8_t>();

  const std::size_t headerBytes = kFixedHeaderBytes + 4 * std::size_t{seedCount} + 4;
  if (bytes.size() < headerBytes) fail(ErrorCode::CorruptHeader, "truncated header");
  Reader seedReader(bytes.subspan(kFixedHeaderBytes));
  std::vector<std::uint32_t> seeds(seedCount);
  for (auto& s : seeds) s = seedReader.le<std::uint32_t>();
  const auto headerCrc = seedReader.le<std::uint32_t>();
  if (crc(bytes.first(headerBytes - 4)) != headerCrc) {
    fail(ErrorCode::CorruptHeader, "header checksum mismatch");
  }

  if ((flags & ~1u) != 0) fail(ErrorCode::CorruptHeader, "unknown flag bits");
  if (k != 3 && k != 4) fail(ErrorCode::CorruptHeader, "k must be 3 or 4");
  if (q < 2 || q > 32 || (q < 32 && k >= (1ull << q))) fail(ErrorCode::CorruptHeader, "bad q");
  if (seedCount != k + 2u) fail(ErrorCode::CorruptHeader, "seed count must be k + 2");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (std::find(seeds.begin() + i + 1, seeds.end(), seeds[i]) != seeds.end()) {
      fail(ErrorCode::CorruptHeader, "seeds must be distinct");
    }
  }

  const bool coupled = (flags & 1u) != 0;
  constexpr std::uint64_t kMaxSlots = std::numeric_limits<std::uint32_t>::max();
  if (m < k || m > kMaxSlots) fail(ErrorCode::InconsistentGeometry, "slot count out of range");
  if (coupled) {
    if (w == 0 || numSegments < k || w > kMaxSlots || numSegments > kMaxSlots ||
        w * numSegments != m) {
      fail(ErrorCode::InconsistentGeometry, "m must equal w * numSegments with numSegments >= k");
    }
  } else if (w != 0 || numSegments != 0) {
    fail(ErrorCode::InconsistentGeometry, "plain tables carry no segment geometry");
  }

  const std::size_t indexBytes = static_cast<std::size_t>(m) * ((q + 7u) / 8u);
  const std::size_t valueBytes = static_cast<std::size_t>(m) * valueWidth;
  if (bytes.size() != headerBytes + indexBytes + valueBytes + 4) {
    fail(ErrorCode::CorruptBody, "body size mismatch");
  }
  const auto body = bytes.subspan(headerBytes, indexBytes + valueBytes);
  Reader tail(bytes.subspan(headerBytes + body.size()));
  if (crc(body) != tail.le<std::uint32_t>()) fail(ErrorCode::CorruptBody, "body checksum mismatch");

  FilterParams p;
  p.n = n;
  p.k = k;
  p.q = q;
  p.c = n > 0 ? static_cast<double>(m) / static_cast<double>(n) : 0.0;
  p.w = static_cast<std::uint32_t>(w);
  p.numSegments = static_cast<std::uint32_t>(numSegments);
  p.m = static_cast<std::uint32_t>(m);
  p.seeds = std::move(seeds);
  p.coupled = coupled;
  p.masterSeed = masterSeed;

  SlotTables tables{IndexTable(p.m, q), std::vector<std::uint8_t>(valueBytes)};
  std::copy(body.begin(), body.begin() + indexBytes, tables.index.bytes().begin());
  std::copy(body.begin() + indexBytes, body.end(), tables.values.begin());
  return Fxlt(std::move(p), valueWidth, std::move(tables));
}

}  // namespace fxlt
