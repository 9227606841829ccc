#ifndef KUNNETH_H
#define KUNNETH_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum KnStatus {
  KN_STATUS_OK = 0,
  KN_STATUS_NULL_POINTER = 1,
  KN_STATUS_INVALID_UTF8 = 2,
  KN_STATUS_VALIDATION = 3,
  KN_STATUS_PARSE = 4,
  KN_STATUS_PARITY = 5,
  KN_STATUS_SURFACE_MISMATCH = 6,
  KN_STATUS_NOT_UNIMODULAR = 7,
  /**
   * An internal consistency check failed.
   */
  KN_STATUS_INVARIANT = 8,
  /**
   * The exact result does not fit in an `int64_t`.
   */
  KN_STATUS_OVERFLOW = 9,
  KN_STATUS_PANIC = 10,
} KnStatus;

/**
 * Opaque surface model.
 */
typedef struct KnSurface KnSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a surface from a built-in name (`P2`, `K3`, `Bl3(P2)`, ...) or a
 * JSON surface spec.
 *
 * # Safety
 * `name_or_json` must be a NUL-terminated string; `out` must be writable.
 */
enum KnStatus kn_surface_new(const char *name_or_json, struct KnSurface **out);

/**
 * # Safety
 * `s` must come from [`kn_surface_new`] and not be used afterwards. Null is a no-op.
 */
void kn_surface_free(struct KnSurface *s);

/**
 * Surface spec as JSON (round-trips through [`kn_surface_new`]).
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum KnStatus kn_surface_json(const struct KnSurface *s, char **out);

/**
 * `χ(v)`. Classes are `"r,c1_1,..,c1_n,ch2"`, `"r,0,ch2"` or a JSON record.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum KnStatus kn_euler_chi(const struct KnSurface *s, const char *v, int64_t *out);

/**
 * Mukai pairing `(v, w)`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum KnStatus kn_mukai_pair(const struct KnSurface *s, const char *v, const char *w, int64_t *out);

/**
 * Expected dimension of the moduli space for `v`; `epsilon` is 1 or 2.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum KnStatus kn_expected_dim(const struct KnSurface *s,
                              const char *v,
                              uint8_t epsilon,
                              int64_t *out);

/**
 * `gcd{ χ(v ∪ w) }` over the standard even basis; 1 means no obstruction.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum KnStatus kn_obstruction(const struct KnSurface *s, const char *v, int64_t *out);

/**
 * Diagonal decomposition after `steps` blow-ups of a rational surface, as
 * JSON. Every step is re-verified; a failed check reports `Invariant`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum KnStatus kn_blowup_decomposition(const struct KnSurface *s, uint32_t steps, char **out);

/**
 * # Safety
 * `p` must come from this library, or be null.
 */
void kn_string_free(char *p);

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *kn_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KUNNETH_H */
