#include "fxlt/fxlt.h"

#include <fstream>
#include <iterator>
#include <memory>
#include <new>
#include <string>
#include <string_view>
#include <vector>

#include "fxlt/codec.hpp"
#include "fxlt/error.hpp"
#include "fxlt/table.hpp"

struct fxlt_filter {
  fxlt::Fxlt impl;
};

namespace {

thread_local std::string g_lastError;

fxlt_status toStatus(fxlt::ErrorCode code) {
  using fxlt::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return FXLT_ERR_INVALID_ARGUMENT;
    case ErrorCode::DuplicateKey: return FXLT_ERR_DUPLICATE_KEY;
    case ErrorCode::BuildExhausted: return FXLT_ERR_BUILD_EXHAUSTED;
    case ErrorCode::BadMagic: return FXLT_ERR_BAD_MAGIC;
    case ErrorCode::UnsupportedVersion: return FXLT_ERR_UNSUPPORTED_VERSION;
    case ErrorCode::CorruptHeader: return FXLT_ERR_CORRUPT_HEADER;
    case ErrorCode::CorruptBody: return FXLT_ERR_CORRUPT_BODY;
    case ErrorCode::InconsistentGeometry: return FXLT_ERR_INCONSISTENT_GEOMETRY;
  }
  return FXLT_ERR_INTERNAL;
}

fxlt_status setError(fxlt_status status, std::string message) {
  g_lastError = std::move(message);
  return status;
}

template <class F>
fxlt_status guarded(F&& body) noexcept {
  try {
    g_lastError.clear();
    return body();
  } catch (const fxlt::Error& e) {
    return setError(toStatus(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return setError(FXLT_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return setError(FXLT_ERR_INTERNAL, e.what());
  } catch (...) {
    return setError(FXLT_ERR_INTERNAL, "unknown error");
  }
}

std::string_view view(const fxlt_slice& s) {
  return {static_cast<const char*>(s.data), s.size};
}

}  // namespace

extern "C" {

void fxlt_build_config_init(fxlt_build_config* config) {
  if (!config) return;
  const fxlt::BuildConfig defaults;
  config->k = defaults.k;
  config->q = defaults.q;
  config->c = defaults.c;
  config->coupled = defaults.coupled ? 1 : 0;
  config->cache_hashes = defaults.cacheHashes ? 1 : 0;
  config->legacy_peel = 0;
  config->value_width = defaults.valueWidth;
  config->master_seed = defaults.masterSeed;
  config->max_retries = defaults.maxRetries;
}

fxlt_status fxlt_build(const fxlt_build_config* config, const fxlt_slice* keys,
                       const fxlt_slice* values, size_t n, fxlt_filter** out,
                       fxlt_build_stats* stats) {
  return guarded([&]() -> fxlt_status {
    if (!config || !out || (n > 0 && (!keys || !values))) {
      return setError(FXLT_ERR_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    fxlt::BuildConfig cfg;
    cfg.k = config->k;
    cfg.q = config->q;
    cfg.c = config->c;
    cfg.coupled = config->coupled != 0;
    cfg.cacheHashes = config->cache_hashes != 0;
    cfg.valueWidth = config->value_width;
    cfg.masterSeed = config->master_seed;
    cfg.maxRetries = config->max_retries;

    std::vector<std::string_view> keyViews(n), valueViews(n);
    for (size_t i = 0; i < n; ++i) {
      keyViews[i] = view(keys[i]);
      valueViews[i] = view(values[i]);
    }

    fxlt::BuildStats local;
    auto report = [&] {
      if (stats) {
        stats->attempts = local.attempts;
        stats->peak_aux_bytes = local.peakAuxBytes;
      }
    };
    try {
      auto filter = config->legacy_peel ? fxlt::buildLegacy(keyViews, valueViews, cfg, &local)
                                        : fxlt::build(keyViews, valueViews, cfg, &local);
      *out = new fxlt_filter{std::move(filter)};
    } catch (const fxlt::Error& e) {
      if (e.code() == fxlt::ErrorCode::BuildExhausted) report();
      throw;
    }
    report();
    return FXLT_OK;
  });
}

void fxlt_free(fxlt_filter* filter) { delete filter; }

int fxlt_lookup(const fxlt_filter* filter, const void* key, size_t key_len, const uint8_t** value) {
  if (!filter || (!key && key_len > 0)) return 0;
  const auto result =
      filter->impl.lookup(std::string_view(static_cast<const char*>(key), key_len));
  if (!result.found) return 0;
  if (value) *value = result.value.data();
  return 1;
}

fxlt_status fxlt_get_info(const fxlt_filter* filter, fxlt_info* info) {
  if (!filter || !info) return setError(FXLT_ERR_INVALID_ARGUMENT, "null argument");
  const auto& p = filter->impl.params();
  const auto footprint = fxlt::memoryFootprint(filter->impl);
  info->n = p.n;
  info->m = p.m;
  info->k = p.k;
  info->q = p.q;
  info->w = p.w;
  info->num_segments = p.numSegments;
  info->value_width = filter->impl.valueWidth();
  info->coupled = p.coupled ? 1 : 0;
  info->master_seed = p.masterSeed;
  info->core_bytes = footprint.coreBytes;
  info->slots_per_key = footprint.slotsPerKey.value_or(0.0);
  info->serialized_bytes = fxlt::serializedSize(filter->impl);
  return FXLT_OK;
}

fxlt_status fxlt_serialize(const fxlt_filter* filter, uint8_t** data, size_t* size) {
  return guarded([&]() -> fxlt_status {
    if (!filter || !data || !size) return setError(FXLT_ERR_INVALID_ARGUMENT, "null argument");
    const auto bytes = fxlt::serialize(filter->impl);
    auto buffer = std::make_unique<uint8_t[]>(bytes.size());
    std::copy(bytes.begin(), bytes.end(), buffer.get());
    *size = bytes.size();
    *data = buffer.release();
    return FXLT_OK;
  });
}

void fxlt_buffer_free(uint8_t* data) { delete[] data; }

fxlt_status fxlt_deserialize(const void* data, size_t size, fxlt_filter** out) {
  return guarded([&]() -> fxlt_status {
    if ((!data && size > 0) || !out) return setError(FXLT_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto filter =
        fxlt::deserialize(std::span<const std::uint8_t>(static_cast<const uint8_t*>(data), size));
    *out = new fxlt_filter{std::move(filter)};
    return FXLT_OK;
  });
}

fxlt_status fxlt_save(const fxlt_filter* filter, const char* path) {
  return guarded([&]() -> fxlt_status {
    if (!filter || !path) return setError(FXLT_ERR_INVALID_ARGUMENT, "null argument");
    const auto bytes = fxlt::serialize(filter->impl);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) return setError(FXLT_ERR_IO, std::string("cannot open ") + path);
    file.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    if (!file) return setError(FXLT_ERR_IO, std::string("write failed: ") + path);
    return FXLT_OK;
  });
}

fxlt_status fxlt_load(const char* path, fxlt_filter** out) {
  return guarded([&]() -> fxlt_status {
    if (!path || !out) return setError(FXLT_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    std::ifstream file(path, std::ios::binary);
    if (!file) return setError(FXLT_ERR_IO, std::string("cannot open ") + path);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                          std::istreambuf_iterator<char>());
    auto filter = fxlt::deserialize(bytes);
    *out = new fxlt_filter{std::move(filter)};
    return FXLT_OK;
  });
}

fxlt_status fxlt_fpr_theoretical(uint32_t k, uint32_t q, double* out) {
  return guarded([&]() -> fxlt_status {
    if (!out) return setError(FXLT_ERR_INVALID_ARGUMENT, "null argument");
    *out = fxlt::fprTheoretical(k, q);
    return FXLT_OK;
  });
}

uint32_t fxlt_hash32(const void* data, size_t size, uint32_t seed) {
  return fxlt::seededHash(std::string_view(static_cast<const char*>(data), data ? size : 0), seed);
}

const char* fxlt_status_string(fxlt_status status) {
  switch (status) {
    case FXLT_OK: return "ok";
    case FXLT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FXLT_ERR_DUPLICATE_KEY: return "duplicate key";
    case FXLT_ERR_BUILD_EXHAUSTED: return "build exhausted";
    case FXLT_ERR_BAD_MAGIC: return "bad magic";
    case FXLT_ERR_UNSUPPORTED_VERSION: return "unsupported version";
    case FXLT_ERR_CORRUPT_HEADER: return "corrupt header (checksum)";
    case FXLT_ERR_CORRUPT_BODY: return "corrupt body (checksum)";
    case FXLT_ERR_INCONSISTENT_GEOMETRY: return "inconsistent geometry";
    case FXLT_ERR_IO: return "i/o error";
    case FXLT_ERR_OUT_OF_MEMORY: return "out of memory";
    case FXLT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fxlt_last_error(void) { return g_lastError.c_str(); }

}  // extern "C"
