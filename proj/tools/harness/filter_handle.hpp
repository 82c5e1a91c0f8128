#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fxlt/fxlt.h"

namespace fxlt::harness {

/// Failure reported by the C API, carrying its status code.
class ApiError : public std::runtime_error {
 public:
  ApiError(fxlt_status status, const std::string& context)
      : std::runtime_error(context + ": " + fxlt_status_string(status) +
                           (*fxlt_last_error() ? std::string(" (") + fxlt_last_error() + ")" : "")),
        status_(status) {}

  fxlt_status status() const noexcept { return status_; }

 private:
  fxlt_status status_;
};

struct FilterDeleter {
  void operator()(fxlt_filter* f) const noexcept { fxlt_free(f); }
};

/// Owning wrapper over an fxlt_filter handle.
class Filter {
 public:
  static Filter build(const fxlt_build_config& config, std::span<const std::string> keys,
                      std::span<const std::string> values, fxlt_build_stats* stats = nullptr) {
    std::vector<fxlt_slice> k(keys.size()), v(values.size());
    for (std::size_t i = 0; i < keys.size(); ++i) k[i] = {keys[i].data(), keys[i].size()};
    for (std::size_t i = 0; i < values.size(); ++i) v[i] = {values[i].data(), values[i].size()};
    if (k.size() != v.size()) throw ApiError(FXLT_ERR_INVALID_ARGUMENT, "build");
    fxlt_filter* raw = nullptr;
    const fxlt_status s = fxlt_build(&config, k.data(), v.data(), k.size(), &raw, stats);
    if (s != FXLT_OK) throw ApiError(s, "build");
    return Filter(raw);
  }

  static Filter load(const std::string& path) {
    fxlt_filter* raw = nullptr;
    const fxlt_status s = fxlt_load(path.c_str(), &raw);
    if (s != FXLT_OK) throw ApiError(s, "load " + path);
    return Filter(raw);
  }

  void save(const std::string& path) const {
    const fxlt_status s = fxlt_save(handle_.get(), path.c_str());
    if (s != FXLT_OK) throw ApiError(s, "save " + path);
  }

  /// Value bytes of a positive lookup, or nullopt.
  std::optional<std::span<const std::uint8_t>> lookup(std::string_view key) const noexcept {
    const std::uint8_t* value = nullptr;
    if (!fxlt_lookup(handle_.get(), key.data(), key.size(), &value)) return std::nullopt;
    return std::span<const std::uint8_t>(value, info_.value_width);
  }

  const fxlt_info& info() const noexcept { return info_; }
  const fxlt_filter* get() const noexcept { return handle_.get(); }

 private:
  explicit Filter(fxlt_filter* raw) : handle_(raw) { fxlt_get_info(raw, &info_); }

  std::unique_ptr<fxlt_filter, FilterDeleter> handle_;
  fxlt_info info_{};
};

}  // namespace fxlt::harness
