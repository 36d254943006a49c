#ifndef BUCKET_HASH_H
#define BUCKET_HASH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BhKind {
  BH_KIND_ONE_CHT = 0,
  BH_KIND_BCHT = 1,
  BH_KIND_BP2HT = 2,
  BH_KIND_IHT = 3,
} BhKind;

typedef enum BhOp {
  BH_OP_INSERT = 0,
  BH_OP_FIND = 1,
} BhOp;

typedef enum BhStatus {
  BH_STATUS_OK = 0,
  /**
   * `bh_table_find` only: the key is not stored.
   */
  BH_STATUS_NOT_FOUND = 1,
  BH_STATUS_NULL_POINTER = -1,
  BH_STATUS_INVALID_ARGUMENT = -2,
  BH_STATUS_OVER_CAPACITY = -3,
  /**
   * Some key could not be placed; no table is returned.
   */
  BH_STATUS_BUILD_FAILED = -4,
  BH_STATUS_PANIC = -5,
} BhStatus;

/**
 * Opaque table handle.
 */
typedef struct BhTable BhTable;

/**
 * Parameters for [`bh_table_build`].
 */
typedef struct BhBuildOptions {
  enum BhKind kind;
  /**
   * Slots per bucket; must be 1 for `BH_KIND_ONE_CHT`.
   */
  uint32_t bucket_size;
  /**
   * Target fill in (0, 1].
   */
  double load_factor;
  /**
   * Iceberg threshold as a percentage of the bucket size; 0 picks 80.
   */
  uint32_t threshold_pct;
  uint64_t seed;
  /**
   * 0 builds sequentially; otherwise the number of worker threads.
   */
  uint32_t workers;
} BhBuildOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t bh_last_error(char *buf, size_t len);

/**
 * Fills `out[0..n]` with `n` distinct keys drawn uniformly from
 * `[0, 2^32 - 1)`. Deterministic in `seed`.
 *
 * # Safety
 * `out` must point to `n` writable `uint32_t`.
 */
enum BhStatus bh_generate_keys(uint64_t seed, size_t n, uint32_t *out);

/**
 * Builds a table holding `keys[0..n]`, each mapped to its derived value.
 * On success `*out` receives a handle that must be released with
 * [`bh_table_free`]; on any failure `*out` is set to null.
 *
 * # Safety
 * `keys` must point to `n` readable `uint32_t`, `opts` and `out` must be valid.
 */
enum BhStatus bh_table_build(const uint32_t *keys,
                             size_t n,
                             const struct BhBuildOptions *opts,
                             struct BhTable **out);

/**
 * Releases a handle from [`bh_table_build`]. Null is ignored.
 *
 * # Safety
 * `table` must be null or a live handle not freed before.
 */
void bh_table_free(struct BhTable *table);

/**
 * Looks up `key`. Returns `BH_STATUS_OK` and writes the value, or
 * `BH_STATUS_NOT_FOUND`. `probes` (may be null) receives the buckets read.
 *
 * # Safety
 * `table` must be a live handle; `value` must be valid; `probes` may be null.
 */
enum BhStatus bh_table_find(const struct BhTable *table,
                            uint32_t key,
                            uint32_t *value,
                            uint32_t *probes);

/**
 * Number of stored pairs; 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t bh_table_len(const struct BhTable *table);

/**
 * Total slots; 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t bh_table_capacity(const struct BhTable *table);

/**
 * Mean bucket reads per key during the build; NaN for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
double bh_table_insert_probes(const struct BhTable *table);

/**
 * Lower-bound DRAM sectors per key under the 32-byte sector model.
 * Returns NaN when `mean_probes < 1` or `bucket_size` is 0.
 */
double bh_predict_sectors(enum BhKind kind, uint32_t bucket_size, double mean_probes, enum BhOp op);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BUCKET_HASH_H */
