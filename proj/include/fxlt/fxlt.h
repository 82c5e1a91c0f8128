/*
 * C interface to the Fuse XORier Lookup Table: a static probabilistic map
 * from byte-string keys to fixed-width values. Inserted keys always return
 * their value; absent keys return a spurious value with probability k/2^q.
 *
 * Handles are opaque. Every fallible call returns an fxlt_status; on failure
 * fxlt_last_error() describes the most recent error on the calling thread.
 */
#ifndef FXLT_FXLT_H
#define FXLT_FXLT_H

#include <stddef.h>
#include <stdint.h>

#if defined(FXLT_BUILDING_LIBRARY)
#define FXLT_API __attribute__((visibility("default")))
#else
#define FXLT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fxlt_filter fxlt_filter;

typedef enum fxlt_status {
  FXLT_OK = 0,
  FXLT_ERR_INVALID_ARGUMENT = 1,
  FXLT_ERR_DUPLICATE_KEY = 2,
  FXLT_ERR_BUILD_EXHAUSTED = 3,
  FXLT_ERR_BAD_MAGIC = 4,
  FXLT_ERR_UNSUPPORTED_VERSION = 5,
  FXLT_ERR_CORRUPT_HEADER = 6,
  FXLT_ERR_CORRUPT_BODY = 7,
  FXLT_ERR_INCONSISTENT_GEOMETRY = 8,
  FXLT_ERR_IO = 9,
  FXLT_ERR_OUT_OF_MEMORY = 10,
  FXLT_ERR_INTERNAL = 11
} fxlt_status;

/* A borrowed byte range. */
typedef struct fxlt_slice {
  const void* data;
  size_t size;
} fxlt_slice;

typedef struct fxlt_build_config {
  uint32_t k;            /* 3 or 4 */
  uint32_t q;            /* bits per index slot, 2..32, k < 2^q */
  double c;              /* slots per key, >= 1.0 */
  int coupled;           /* spatial coupling */
  int cache_hashes;      /* keep per-key neighborhoods during construction */
  int legacy_peel;       /* round-based peel instead of the linear queue peel */
  uint32_t value_width;  /* bytes per value, may be 0 */
  uint64_t master_seed;
  uint32_t max_retries;  /* >= 1 */
} fxlt_build_config;

typedef struct fxlt_build_stats {
  uint32_t attempts;
  uint64_t peak_aux_bytes;
} fxlt_build_stats;

typedef struct fxlt_info {
  uint64_t n;
  uint64_t m;
  uint32_t k;
  uint32_t q;
  uint64_t w;
  uint64_t num_segments;
  uint32_t value_width;
  int coupled;
  uint64_t master_seed;
  uint64_t core_bytes;
  double slots_per_key; /* 0 for an empty filter */
  uint64_t serialized_bytes;
} fxlt_info;

/* Defaults: k=3, q=8, c=1.15, coupled, no cache, value_width=8, seed 0,
 * max_retries=100. */
FXLT_API void fxlt_build_config_init(fxlt_build_config* config);

/* Builds a filter over n distinct keys. values[i] must be value_width bytes.
 * stats may be NULL; it is filled on success and on FXLT_ERR_BUILD_EXHAUSTED. */
FXLT_API fxlt_status fxlt_build(const fxlt_build_config* config, const fxlt_slice* keys,
                                const fxlt_slice* values, size_t n, fxlt_filter** out,
                                fxlt_build_stats* stats);

FXLT_API void fxlt_free(fxlt_filter* filter);

/* Returns 1 when the key decodes to a stored value and points *value at
 * value_width bytes owned by the filter; returns 0 otherwise. value may be NULL. */
FXLT_API int fxlt_lookup(const fxlt_filter* filter, const void* key, size_t key_len,
                         const uint8_t** value);

FXLT_API fxlt_status fxlt_get_info(const fxlt_filter* filter, fxlt_info* info);

/* Serialized bytes are allocated by the library; release with fxlt_buffer_free. */
FXLT_API fxlt_status fxlt_serialize(const fxlt_filter* filter, uint8_t** data, size_t* size);
FXLT_API void fxlt_buffer_free(uint8_t* data);
FXLT_API fxlt_status fxlt_deserialize(const void* data, size_t size, fxlt_filter** out);

FXLT_API fxlt_status fxlt_save(const fxlt_filter* filter, const char* path);
FXLT_API fxlt_status fxlt_load(const char* path, fxlt_filter** out);

/* k * 2^-q; FXLT_ERR_INVALID_ARGUMENT when k >= 2^q. */
FXLT_API fxlt_status fxlt_fpr_theoretical(uint32_t k, uint32_t q, double* out);

FXLT_API uint32_t fxlt_hash32(const void* data, size_t size, uint32_t seed);

FXLT_API const char* fxlt_status_string(fxlt_status status);
FXLT_API const char* fxlt_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* FXLT_FXLT_H */
