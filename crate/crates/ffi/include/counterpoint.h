#ifndef COUNTERPOINT_H
#define COUNTERPOINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpExtensionMode {
  CP_EXTENSION_MODE_CHAINED = 0,
  CP_EXTENSION_MODE_DIRECT = 1,
} CpExtensionMode;

/**
 * Linkage rule between a symmetry and its extensions.
 */
typedef enum CpLinkage {
  CP_LINKAGE_INTERVAL = 0,
  CP_LINKAGE_FIBER = 1,
  CP_LINKAGE_FULL = 2,
} CpLinkage;

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_MODULUS = 2,
  CP_STATUS_NOT_INVERTIBLE = 3,
  CP_STATUS_INVALID_DICHOTOMY = 4,
  CP_STATUS_NOT_STRONG = 5,
  CP_STATUS_NOT_CONSONANT = 6,
  CP_STATUS_INVALID_EMBEDDING = 7,
  CP_STATUS_MODULUS_TOO_LARGE = 8,
  CP_STATUS_NO_CANDIDATES = 9,
  CP_STATUS_INVALID_POINT = 10,
  CP_STATUS_PARSE = 11,
  CP_STATUS_INDEX_OUT_OF_RANGE = 12,
  CP_STATUS_INTERNAL = 13,
} CpStatus;

/**
 * A dichotomy of `Z_n`.
 */
typedef struct CpDichotomy CpDichotomy;

/**
 * Maximal symmetries of one interval with their admitted successors.
 */
typedef struct CpSuccessorSet CpSuccessorSet;

/**
 * One counterpoint symmetry `e^(ε·t)(u + ε·u·v)`.
 */
typedef struct CpSymmetry {
  uint32_t t;
  uint32_t u;
  uint32_t v;
} CpSymmetry;

/**
 * A dual number `cantus + ε·interval`.
 */
typedef struct CpDualNumber {
  uint32_t cantus;
  uint32_t interval;
} CpDualNumber;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *cp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cp_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cp_string_free(char *s);

/**
 * Builds a dichotomy from `len` residues.
 *
 * # Safety
 * `members` must point to `len` readable values; `out` must be writable.
 */
enum CpStatus cp_dichotomy_new(uint32_t modulus,
                               const uint32_t *members,
                               size_t len,
                               struct CpDichotomy **out);

/**
 * Parses `"0,2,3"` or a preset name such as `"U0"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CpStatus cp_dichotomy_parse(uint32_t modulus, const char *text, struct CpDichotomy **out);

/**
 * # Safety
 * `d` must come from this library and not have been freed. Null is ignored.
 */
void cp_dichotomy_free(struct CpDichotomy *d);

/**
 * # Safety
 * `d` must be a live handle.
 */
uint32_t cp_dichotomy_modulus(const struct CpDichotomy *d);

/**
 * Writes whether the dichotomy has exactly one quasipolarity.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_dichotomy_is_strong(const struct CpDichotomy *d, bool *out);

/**
 * Writes the polarity `e^translation·linear`; fails with `NOT_STRONG`
 * otherwise.
 *
 * # Safety
 * `d` must be a live handle; both out-pointers must be writable.
 */
enum CpStatus cp_dichotomy_polarity(const struct CpDichotomy *d,
                                    uint32_t *translation,
                                    uint32_t *linear);

/**
 * Quasipolarity scan as JSON.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_dichotomy_analyze_json(const struct CpDichotomy *d, char **out);

/**
 * Counterpoint symmetries of `cantus + ε·interval`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_symmetries(const struct CpDichotomy *d,
                            uint32_t cantus,
                            uint32_t interval,
                            struct CpSuccessorSet **out);

/**
 * Extended symmetries of `0 + ε·interval` along `x ↦ factor·x` from
 * `source` into `target`.
 *
 * # Safety
 * `source` and `target` must be live handles; `out` must be writable.
 */
enum CpStatus cp_extend(const struct CpDichotomy *source,
                        const struct CpDichotomy *target,
                        uint32_t factor,
                        uint32_t interval,
                        enum CpLinkage linkage,
                        struct CpSuccessorSet **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void cp_successor_set_free(struct CpSuccessorSet *s);

/**
 * Maximal `|g(K[ε]) ∩ K[ε]|`, or 0 for a null handle.
 *
 * # Safety
 * `s` must be a live handle or null.
 */
uint64_t cp_successor_set_cardinality(const struct CpSuccessorSet *s);

/**
 * Interval the set was computed for (in the target ring for extensions).
 *
 * # Safety
 * `s` must be a live handle or null.
 */
uint32_t cp_successor_set_interval(const struct CpSuccessorSet *s);

/**
 * Number of maximal symmetries.
 *
 * # Safety
 * `s` must be a live handle or null.
 */
size_t cp_successor_set_symmetry_count(const struct CpSuccessorSet *s);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_successor_set_symmetry(const struct CpSuccessorSet *s,
                                        size_t index,
                                        struct CpSymmetry *out);

/**
 * Number of admitted successors (union over the maximal symmetries).
 *
 * # Safety
 * `s` must be a live handle or null.
 */
size_t cp_successor_set_successor_count(const struct CpSuccessorSet *s);

/**
 * Copies up to `capacity` successors into `buf` and writes the number
 * copied to `written`.
 *
 * # Safety
 * `s` must be a live handle; `buf` must hold `capacity` values; `written`
 * must be writable.
 */
enum CpStatus cp_successor_set_successors(const struct CpSuccessorSet *s,
                                          struct CpDualNumber *buf,
                                          size_t capacity,
                                          size_t *written);

/**
 * The set as JSON: interval, symmetries in text notation, cardinality.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_successor_set_json(const struct CpSuccessorSet *s, char **out);

/**
 * Reproduces the `U0` table against the bundled reference values, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum CpStatus cp_table1_json(enum CpExtensionMode mode, enum CpLinkage linkage, char **out);

/**
 * Maximal intersection measure for the consonance `num/den` of the octave,
 * written as a reduced fraction.
 *
 * # Safety
 * Both out-pointers must be writable.
 */
enum CpStatus cp_continuum_measure(int64_t num, int64_t den, int64_t *out_num, int64_t *out_den);

/**
 * Maximizers, measure and successor arcs for `num/den`, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum CpStatus cp_continuum_json(int64_t num, int64_t den, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COUNTERPOINT_H */
