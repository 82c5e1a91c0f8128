#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace fxlt::test {

/// Owns keys and values and exposes the string_view spans the core API takes.
struct Dataset {
  std::vector<std::string> keys;
  std::vector<std::string> values;
  std::vector<std::string_view> keyViews;
  std::vector<std::string_view> valueViews;

  void refreshViews() {
    keyViews.assign(keys.begin(), keys.end());
    valueViews.assign(values.begin(), values.end());
  }
};

inline std::string randomBytes(std::mt19937_64& rng, std::size_t len) {
  std::string s(len, '\0');
  for (auto& ch : s) ch = static_cast<char>(rng() & 0xFF);
  return s;
}

/// n distinct keys ("<prefix><index>") with random valueWidth-byte values.
inline Dataset makeDataset(std::size_t n, std::uint32_t valueWidth, std::uint64_t seed,
                           std::size_t keyBytes = 0) {
  std::mt19937_64 rng(seed);
  Dataset d;
  d.keys.reserve(n);
  d.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string key = "k" + std::to_string(seed) + ":" + std::to_string(i);
    if (key.size() < keyBytes) key += randomBytes(rng, keyBytes - key.size());
    d.keys.push_back(std::move(key));
    d.values.push_back(randomBytes(rng, valueWidth));
  }
  d.refreshViews();
  return d;
}

}  // namespace fxlt::test
