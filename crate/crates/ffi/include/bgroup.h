/* C ABI for the bgroup library. See README for usage. */

#ifndef BGROUP_H
#define BGROUP_H

/* Generated by cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum BgStatus {
  BgOk = 0,
  BgErrInput = 1,
  BgErrValidation = 2,
  BgErrResource = 3,
  BgErrNull = 4,
  BgErrUtf8 = 5,
  BgErrInternal = 6,
} BgStatus;

// Opaque partition family handle.
typedef struct BgFamily BgFamily;

// Opaque group handle.
typedef struct BgGroup BgGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message for this thread, or NULL. Free with [`bg_string_free`].
char *bg_last_error(void);

// Frees a string returned by this library. NULL is a no-op.
void bg_string_free(char *s);

// Parses a group JSON document into a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum BgStatus bg_group_parse_json(const char *json_text, struct BgGroup **out);

// # Safety
// `group` must come from this library and not be freed twice.
void bg_group_free(struct BgGroup *group);

// Rank of the group, or -1 on NULL.
//
// # Safety
// `group` must be a live handle or NULL.
int32_t bg_group_rank(const struct BgGroup *group);

// Serializes the group back to its JSON document.
//
// # Safety
// `group` must be a live handle; `out` a valid pointer.
enum BgStatus bg_group_to_json(const struct BgGroup *group, char **out);

// Invariants report: rank, regulator index, per-type ranks and mu values.
//
// # Safety
// `group` must be a live handle; `out` a valid pointer.
enum BgStatus bg_group_invariants_json(const struct BgGroup *group, char **out);

// Partition spectrum report, optionally with witness decompositions.
//
// # Safety
// `group` must be a live handle; `out` a valid pointer.
enum BgStatus bg_group_spectrum_json(const struct BgGroup *group,
                                     bool include_decompositions,
                                     char **out);

// Near-isomorphism test: equal regulator shape and equal mu maps.
//
// # Safety
// Both handles must be live; `out` a valid pointer.
enum BgStatus bg_group_near_iso(const struct BgGroup *a, const struct BgGroup *b, bool *out);

// Parses family text: partitions like `4,2` or `2^3,1^2`, separated by
// newlines or semicolons, or a JSON array of arrays.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum BgStatus bg_family_parse(const char *text, struct BgFamily **out);

// Builds S(n,k).
//
// # Safety
// `out` must be a valid pointer.
enum BgStatus bg_family_s(uint32_t n, uint32_t k, struct BgFamily **out);

// Builds C(n,k).
//
// # Safety
// `out` must be a valid pointer.
enum BgStatus bg_family_c(uint32_t n, uint32_t k, struct BgFamily **out);

// # Safety
// `family` must come from this library and not be freed twice.
void bg_family_free(struct BgFamily *family);

// Family as a JSON array of arrays.
//
// # Safety
// `family` must be a live handle; `out` a valid pointer.
enum BgStatus bg_family_to_json(const struct BgFamily *family, char **out);

// Hook condition: max part + max length <= n + 1. Writes 1 or 0.
//
// # Safety
// `family` must be a live handle; `out` a valid pointer.
enum BgStatus bg_family_hooked(const struct BgFamily *family, bool *out);

// Bounded search for a group whose spectrum contains (`equals_mode` = false)
// or equals (`equals_mode` = true) the family. Writes the verdict report as
// JSON; the witness group document is inlined when realized.
//
// # Safety
// `family` must be a live handle; `out` a valid pointer.
enum BgStatus bg_search_json(const struct BgFamily *family,
                             bool equals_mode,
                             uint32_t max_primes,
                             uint32_t max_exponent,
                             uint32_t max_types,
                             uint64_t time_cap_secs,
                             char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BGROUP_H */
