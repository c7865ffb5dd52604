#ifndef FFJAC_H
#define FFJAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define FFJAC_STRATEGY_LINEAR 0

#define FFJAC_STRATEGY_BINARY 1

typedef enum FfjacStatus {
  FFJAC_STATUS_OK = 0,
  FFJAC_STATUS_NULL_POINTER = 1,
  FFJAC_STATUS_INVALID_UTF8 = 2,
  FFJAC_STATUS_INVALID_ARGUMENT = 3,
  FFJAC_STATUS_REDUCIBLE = 4,
  FFJAC_STATUS_NONZERO_DEGREE = 5,
  FFJAC_STATUS_FIELD_MISMATCH = 6,
  FFJAC_STATUS_NO_DEGREE_ONE_PLACE = 7,
  FFJAC_STATUS_JSON = 8,
  FFJAC_STATUS_INTERNAL = 9,
  FFJAC_STATUS_PANIC = 10,
} FfjacStatus;

// A reduced divisor class.
typedef struct FfjacClass FfjacClass;

// A function field F/F_p(x).
typedef struct FfjacField FfjacField;

// Jacobian arithmetic context: field, base place A and caches.
typedef struct FfjacJacobian FfjacJacobian;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. Empty after a
// successful call. Valid until the next call on the same thread.
const char *ffjac_last_error(void);

// Static description of a status code.
const char *ffjac_status_str(enum FfjacStatus status);

// Release a string returned by this library.
//
// # Safety
// `s` must come from this library or be null.
void ffjac_string_free(char *s);

// Build F = F_p(x)[y]/(f) with f = y^n + sum_{i<n} a_i(x) y^i.
//
// `coeffs` holds the coefficients of a_0, ..., a_{n-1} back to back,
// lowest degree first; `lens[i]` is the number of coefficients of a_i.
//
// # Safety
// `coeffs` must point to `sum(lens)` values and `lens` to `n` values.
enum FfjacStatus ffjac_field_new(uint64_t p,
                                 const int64_t *coeffs,
                                 const uintptr_t *lens,
                                 uintptr_t n,
                                 struct FfjacField **out);

// # Safety
// `json` must be a NUL-terminated string.
enum FfjacStatus ffjac_field_from_json(const char *json, struct FfjacField **out);

// # Safety
// `field` must be a live handle; free the string with `ffjac_string_free`.
enum FfjacStatus ffjac_field_to_json(const struct FfjacField *field, char **out);

// # Safety
// `field` must be a live handle.
enum FfjacStatus ffjac_field_genus(const struct FfjacField *field, uint32_t *out);

// # Safety
// `field` must come from this library or be null.
void ffjac_field_free(struct FfjacField *field);

// New arithmetic context. `strategy` is one of `FFJAC_STRATEGY_*`.
//
// # Safety
// `field` must be a live handle. The context keeps its own reference
// to the field, so the field handle may be freed afterwards.
enum FfjacStatus ffjac_jacobian_new(const struct FfjacField *field,
                                    uint32_t strategy,
                                    bool caching,
                                    struct FfjacJacobian **out);

// # Safety
// `jac` must be a live handle.
enum FfjacStatus ffjac_jacobian_genus(const struct FfjacJacobian *jac, uint32_t *out);

// # Safety
// `jac` must come from this library or be null.
void ffjac_jacobian_free(struct FfjacJacobian *jac);

// # Safety
// `jac` must be a live handle.
enum FfjacStatus ffjac_class_zero(const struct FfjacJacobian *jac, struct FfjacClass **out);

// Class of a random degree-zero divisor, deterministic in `seed`.
//
// # Safety
// `jac` must be a live handle.
enum FfjacStatus ffjac_class_random(struct FfjacJacobian *jac,
                                    uint64_t seed,
                                    struct FfjacClass **out);

// Reduce a degree-zero divisor given as JSON.
//
// # Safety
// `jac` must be a live handle and `divisor_json` NUL-terminated.
enum FfjacStatus ffjac_class_reduce(struct FfjacJacobian *jac,
                                    const char *divisor_json,
                                    struct FfjacClass **out);

// # Safety
// All handles must be live.
enum FfjacStatus ffjac_class_add(struct FfjacJacobian *jac,
                                 const struct FfjacClass *a,
                                 const struct FfjacClass *b,
                                 struct FfjacClass **out);

// # Safety
// All handles must be live.
enum FfjacStatus ffjac_class_neg(struct FfjacJacobian *jac,
                                 const struct FfjacClass *a,
                                 struct FfjacClass **out);

// # Safety
// All handles must be live.
enum FfjacStatus ffjac_class_scalar_mul(struct FfjacJacobian *jac,
                                        int64_t k,
                                        const struct FfjacClass *a,
                                        struct FfjacClass **out);

// Representatives are unique, so this decides equality of classes.
//
// # Safety
// Both handles must be live.
enum FfjacStatus ffjac_class_equal(const struct FfjacClass *a,
                                   const struct FfjacClass *b,
                                   bool *out);

// # Safety
// `c` must be a live handle.
enum FfjacStatus ffjac_class_is_zero(const struct FfjacClass *c, bool *out);

// The multiplicity r of the base place in the representative.
//
// # Safety
// `c` must be a live handle.
enum FfjacStatus ffjac_class_r(const struct FfjacClass *c, uint32_t *out);

// # Safety
// Handles must be live; free the string with `ffjac_string_free`.
enum FfjacStatus ffjac_class_to_json(const struct FfjacJacobian *jac,
                                     const struct FfjacClass *c,
                                     char **out);

// # Safety
// `jac` must be a live handle and `json` NUL-terminated.
enum FfjacStatus ffjac_class_from_json(const struct FfjacJacobian *jac,
                                       const char *json,
                                       struct FfjacClass **out);

// # Safety
// `c` must come from this library or be null.
void ffjac_class_free(struct FfjacClass *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FFJAC_H */
