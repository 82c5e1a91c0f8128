#include <doctest.h>

#include <zlib.h>

#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "fxlt/codec.hpp"
#include "fxlt/error.hpp"
#include "test_support.hpp"

using namespace fxlt;

namespace {

Fxlt sampleFilter(std::size_t n, std::uint32_t k, std::uint32_t q, std::uint32_t valueWidth,
                  bool coupled, std::uint64_t seed, test::Dataset* out = nullptr) {
  auto d = test::makeDataset(n, valueWidth, seed);
  BuildConfig cfg;
  cfg.k = k;
  cfg.q = q;
  cfg.c = coupled ? 1.3 : 1.4;
  cfg.coupled = coupled;
  cfg.valueWidth = valueWidth;
  cfg.masterSeed = seed;
  auto f = build(d.keyViews, d.valueViews, cfg);
  if (out) *out = std::move(d);
  return f;
}

ErrorCode decodeError(std::span<const std::uint8_t> bytes) {
  try {
    deserialize(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a codec error");
  return ErrorCode::InvalidArgument;
}

std::uint64_t readLe(const std::vector<std::uint8_t>& b, std::size_t at, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t{b[at + i]} << (8 * i);
  return v;
}

void writeLe(std::vector<std::uint8_t>& b, std::size_t at, std::size_t width, std::uint64_t v) {
  for (std::size_t i = 0; i < width; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

// Recomputes the header checksum after a deliberate header edit.
void resignHeader(std::vector<std::uint8_t>& b, std::uint32_t k) {
  const std::size_t crcAt = headerSize(k) - 4;
  writeLe(b, crcAt, 4, crc32(0L, b.data(), static_cast<uInt>(crcAt)));
}

std::vector<std::uint8_t> readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("serialized layout is little-endian and bit-exact") {
  const auto f = sampleFilter(1000, 3, 8, 1, true, 7);
  REQUIRE(f.params().m == 1320);
  const auto bytes = serialize(f);
  CHECK(headerSize(3) == 75);
  CHECK(bytes.size() == 75 + 2640 + 4);
  CHECK(bytes.size() == serializedSize(f));

  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "FXLT");
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 1);
  CHECK(bytes[6] == 3);
  CHECK(bytes[7] == 8);
  CHECK(readLe(bytes, 8, 2) == 1);
  CHECK(readLe(bytes, 10, 8) == 264);
  CHECK(readLe(bytes, 18, 8) == 5);
  CHECK(readLe(bytes, 26, 8) == 1320);
  CHECK(readLe(bytes, 34, 8) == 1000);
  CHECK(readLe(bytes, 42, 8) == f.params().masterSeed);
  CHECK(bytes[50] == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(readLe(bytes, 51 + 4 * i, 4) == f.params().seeds[i]);
  CHECK(readLe(bytes, 71, 4) == crc32(0L, bytes.data(), 71));
  const std::size_t bodyBytes = 2640;
  CHECK(readLe(bytes, 75 + bodyBytes, 4) == crc32(0L, bytes.data() + 75, bodyBytes));
  CHECK(bytes[75 + 17] == f.indexTable().get(17));
}

TEST_CASE("multi-byte slots are stored little-endian") {
  const auto f = sampleFilter(500, 4, 12, 3, false, 8);
  const auto bytes = serialize(f);
  const std::size_t base = headerSize(4);
  for (std::uint32_t s = 0; s < 50; ++s) CHECK(readLe(bytes, base + 2 * s, 2) == f.indexTable().get(s));
}

TEST_CASE("round trip preserves every lookup and re-serializes identically") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const std::uint32_t k = 3 + t % 2;
    const std::uint32_t q = std::vector<std::uint32_t>{3, 8, 12, 16, 24, 32}[t % 6];
    const std::uint32_t vw = static_cast<std::uint32_t>(rng() % 6);
    const bool coupled = (t / 2) % 2 == 0;
    test::Dataset d;
    const auto f = sampleFilter(1 + rng() % 800, k, q, vw, coupled, 1000 + t, &d);
    const auto bytes = serialize(f);
    const auto g = deserialize(bytes);
    CHECK(serialize(g) == bytes);
    for (const auto& key : d.keys) {
      const auto a = f.lookup(key), b = g.lookup(key);
      CHECK(b.found);
      CHECK(std::equal(a.value.begin(), a.value.end(), b.value.begin(), b.value.end()));
    }
    for (int p = 0; p < 200; ++p) {
      const auto key = test::randomBytes(rng, 16);
      const auto a = f.lookup(key), b = g.lookup(key);
      CHECK(a.found == b.found);
      CHECK(std::equal(a.value.begin(), a.value.end(), b.value.begin(), b.value.end()));
    }
  }
}

TEST_CASE("every single-byte corruption is rejected") {
  const auto bytes = serialize(sampleFilter(300, 3, 8, 2, true, 9));
  std::mt19937_64 rng(10);
  for (std::size_t at = 0; at < bytes.size(); ++at) {
    auto bad = bytes;
    bad[at] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    CAPTURE(at);
    CHECK_THROWS_AS(deserialize(bad), Error);
  }
}

TEST_CASE("specific decode errors") {
  const auto bytes = serialize(sampleFilter(300, 3, 8, 2, true, 11));

  SUBCASE("bad magic") {
    auto bad = bytes;
    bad[0] = 'X';
    CHECK(decodeError(bad) == ErrorCode::BadMagic);
    CHECK(decodeError(std::span(bytes).first(2)) == ErrorCode::BadMagic);
  }
  SUBCASE("unsupported version") {
    auto bad = bytes;
    bad[4] = 2;
    CHECK(decodeError(bad) == ErrorCode::UnsupportedVersion);
  }
  SUBCASE("header checksum") {
    auto bad = bytes;
    bad[34] ^= 1;  // n
    CHECK(decodeError(bad) == ErrorCode::CorruptHeader);
  }
  SUBCASE("truncated header") {
    CHECK(decodeError(std::span(bytes).first(40)) == ErrorCode::CorruptHeader);
    CHECK(decodeError(std::span(bytes).first(60)) == ErrorCode::CorruptHeader);
  }
  SUBCASE("truncated or padded body") {
    for (std::size_t cut : {std::size_t{1}, std::size_t{4}, std::size_t{100}}) {
      CHECK(decodeError(std::span(bytes).first(bytes.size() - cut)) == ErrorCode::CorruptBody);
    }
    CHECK(decodeError(std::span(bytes).first(headerSize(3))) == ErrorCode::CorruptBody);
    auto longer = bytes;
    longer.push_back(0);
    CHECK(decodeError(longer) == ErrorCode::CorruptBody);
  }
  SUBCASE("body checksum") {
    auto bad = bytes;
    bad[headerSize(3) + 5] ^= 0x40;
    CHECK(decodeError(bad) == ErrorCode::CorruptBody);
  }
  SUBCASE("coupled m must equal w * numSegments") {
    auto bad = bytes;
    writeLe(bad, 26, 8, readLe(bad, 26, 8) + 1);
    resignHeader(bad, 3);
    CHECK(decodeError(bad) == ErrorCode::InconsistentGeometry);
  }
  SUBCASE("coupled numSegments must be at least k") {
    auto bad = bytes;
    const auto m = readLe(bad, 26, 8);
    writeLe(bad, 10, 8, m / 2);
    writeLe(bad, 18, 8, 2);
    writeLe(bad, 26, 8, (m / 2) * 2);
    resignHeader(bad, 3);
    CHECK(decodeError(bad) == ErrorCode::InconsistentGeometry);
  }
  SUBCASE("field sanity") {
    auto bad = bytes;
    bad[6] = 5;  // k
    resignHeader(bad, 3);
    CHECK(decodeError(bad) == ErrorCode::CorruptHeader);
    bad = bytes;
    bad[7] = 1;  // q
    resignHeader(bad, 3);
    CHECK(decodeError(bad) == ErrorCode::CorruptHeader);
    bad = bytes;
    writeLe(bad, 55, 4, readLe(bad, 51, 4));  // duplicate seed
    resignHeader(bad, 3);
    CHECK(decodeError(bad) == ErrorCode::CorruptHeader);
  }
}

TEST_CASE("committed golden file loads and answers every key") {
  const std::string dir = FXLT_TEST_DATA_DIR;
  const auto bytes = readFile(dir + "/golden.fxlt");
  const auto f = deserialize(bytes);
  CHECK(f.params().k == 3);
  CHECK(f.valueWidth() == 2);

  std::ifstream tsv(dir + "/golden.tsv");
  std::string line;
  std::size_t checked = 0;
  while (std::getline(tsv, line)) {
    const auto tab = line.find('\t');
    const std::string key = line.substr(0, tab);
    const auto expected = std::stoul(line.substr(tab + 1));
    const auto r = f.lookup(key);
    REQUIRE(r.found);
    CHECK((r.value[0] | (r.value[1] << 8)) == expected);
    ++checked;
  }
  CHECK(checked == f.params().n);
  CHECK(serialize(f) == bytes);
}
