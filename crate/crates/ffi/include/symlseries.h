#ifndef SYMLSERIES_H
#define SYMLSERIES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every function.
 */
typedef enum SymStatus {
  SYM_STATUS_OK = 0,
  SYM_STATUS_INVALID_ARGUMENT = 1,
  SYM_STATUS_PARITY_MISMATCH = 2,
  SYM_STATUS_POLE = 3,
  SYM_STATUS_INFEASIBLE = 4,
  SYM_STATUS_NEGATIVE_SQRT = 5,
  SYM_STATUS_NULL_POINTER = 6,
  SYM_STATUS_INVALID_UTF8 = 7,
  /**
   * One or more constants failed to match (verification only).
   */
  SYM_STATUS_VERIFY_FAILED = 8,
  SYM_STATUS_PANIC = 9,
} SymStatus;

/**
 * Opaque symmetric function.
 */
typedef struct SymFunction SymFunction;

/**
 * Opaque L-value with its error bound.
 */
typedef struct SymLValue SymLValue;

/**
 * Verdict of the Dirichlet-character test.
 *
 * `witness_kind` is 0 when there is no witness, 1 for a residue `a` where
 * the vanishing rule fails, and 2 for a unit pair `(a, b)` breaking
 * multiplicativity.
 */
typedef struct SymVerdict {
  bool is_character;
  uint32_t witness_kind;
  uint32_t a;
  uint32_t b;
} SymVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null.
 *
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *symls_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *symls_version(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void symls_string_free(char *s);

/**
 * The block-sign function χ_{2m}, m >= 2.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SymStatus symls_chi_2m(uint32_t m, struct SymFunction **out);

/**
 * The odd-support function f_{4m}, m >= 1.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SymStatus symls_f_4m(uint32_t m, struct SymFunction **out);

/**
 * A real-valued function from `len` entries `a ↦ num/den`; the remaining
 * residues follow from the reflection law for the parity `odd`.
 *
 * # Safety
 * `keys`, `nums` and `dens` must each point to `len` readable elements;
 * `out` must be a valid pointer.
 */
enum SymStatus symls_from_table(uint32_t modulus,
                                bool odd,
                                const uint32_t *keys,
                                const int64_t *nums,
                                const int64_t *dens,
                                size_t len,
                                struct SymFunction **out);

/**
 * Parse `{modulus, parity, values}` JSON with complex-rational values.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be a valid pointer.
 */
enum SymStatus symls_from_json(const char *json, struct SymFunction **out);

/**
 * # Safety
 * `f` must come from this library and not have been freed. Null is ignored.
 */
void symls_function_free(struct SymFunction *f);

/**
 * Modulus N, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint32_t symls_function_modulus(const struct SymFunction *f);

/**
 * JSON form of the function.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum SymStatus symls_function_to_json(const struct SymFunction *f, char **out);

/**
 * Dirichlet-character test with a witness on failure.
 *
 * # Safety
 * `f` must be a live handle; `out` must be a valid pointer.
 */
enum SymStatus symls_classify(const struct SymFunction *f, struct SymVerdict *out);

/**
 * Evaluate L(r, f).
 *
 * `method` is one of `theorem23`, `half_sum`, `trig3`, `trig3_f`, `trig5`,
 * `direct`. `tolerance` applies to `direct` and may be null for the
 * default `1e-12`.
 *
 * # Safety
 * `f` must be a live handle, `method` a nul-terminated string, `tolerance`
 * null or nul-terminated, and `out` a valid pointer.
 */
enum SymStatus symls_eval(const struct SymFunction *f,
                          uint32_t r,
                          const char *method,
                          uint32_t precision_bits,
                          const char *tolerance,
                          struct SymLValue **out);

/**
 * # Safety
 * `v` must come from this library and not have been freed. Null is ignored.
 */
void symls_lvalue_free(struct SymLValue *v);

/**
 * Real part rounded to a double; NaN for a null handle.
 *
 * # Safety
 * `v` must be null or a live handle.
 */
double symls_lvalue_re(const struct SymLValue *v);

/**
 * Imaginary part rounded to a double; NaN for a null handle.
 *
 * # Safety
 * `v` must be null or a live handle.
 */
double symls_lvalue_im(const struct SymLValue *v);

/**
 * Absolute error bound rounded up to a double; NaN for a null handle.
 *
 * # Safety
 * `v` must be null or a live handle.
 */
double symls_lvalue_error_bound(const struct SymLValue *v);

/**
 * `{value_re, value_im, error_bound, method, terms_used}` with decimal
 * strings at full precision.
 *
 * # Safety
 * `v` must be a live handle; `out` must be a valid pointer.
 */
enum SymStatus symls_lvalue_to_json(const struct SymLValue *v, char **out);

/**
 * Compare every tabulated closed form with the half-length sum.
 *
 * Writes `[{id, family, m, r, decimal_value, matched, residual}]` to
 * `out_json` (may be null) and returns `VerifyFailed` when any entry
 * misses.
 *
 * # Safety
 * `out_json` must be null or a valid pointer.
 */
enum SymStatus symls_verify_constants(uint32_t precision_bits, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMLSERIES_H */
