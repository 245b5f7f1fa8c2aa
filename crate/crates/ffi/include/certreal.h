#ifndef CERTREAL_H
#define CERTREAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CrStatus {
  CR_STATUS_OK = 0,
  CR_STATUS_NULL_POINTER = 1,
  CR_STATUS_INVALID_ARGUMENT = 2,
  CR_STATUS_PARSE_ERROR = 3,
  CR_STATUS_PRECONDITION = 4,
  CR_STATUS_FUEL_EXHAUSTED = 5,
  CR_STATUS_PANIC = 6,
} CrStatus;

/**
 * Modulus kind for [`cr_grilliot`].
 */
typedef enum CrMode {
  CR_MODE_MPC = 0,
  CR_MODE_DIF = 1,
  CR_MODE_RIE = 2,
} CrMode;

/**
 * A function of `x` on an interval, with its derived uniform modulus.
 */
typedef struct CrFunction CrFunction;

/**
 * An exact real.
 */
typedef struct CrReal CrReal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Release with
 * [`cr_string_free`].
 */
char *cr_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cr_string_free(char *s);

/**
 * Parses a rational such as `"3/4"`, `"-2"` or `"0.125"` into a real.
 *
 * # Safety
 * `q` must be a NUL-terminated string; `out` must be writable.
 */
enum CrStatus cr_real_from_rational(const char *q, struct CrReal **out);

/**
 * # Safety
 * `x` must be a live handle or null.
 */
void cr_real_free(struct CrReal *x);

/**
 * `out = a + b`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum CrStatus cr_real_add(const struct CrReal *a, const struct CrReal *b, struct CrReal **out);

/**
 * `out = a * b`.
 *
 * # Safety
 * As for [`cr_real_add`].
 */
enum CrStatus cr_real_mul(const struct CrReal *a, const struct CrReal *b, struct CrReal **out);

/**
 * `out = sqrt(max(x, 0))`.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum CrStatus cr_real_sqrt(const struct CrReal *x, struct CrReal **out);

/**
 * A rational within `2^-n` of `x`, as a `"num/den"` string.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum CrStatus cr_real_approx(const struct CrReal *x, uint32_t n, char **out);

/**
 * Compiles an expression such as `"x*x - 1/2"` on `[a, b]`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum CrStatus cr_function_parse(const char *expr,
                                const char *a,
                                const char *b,
                                struct CrFunction **out);

/**
 * # Safety
 * `f` must be a live handle or null.
 */
void cr_function_free(struct CrFunction *f);

/**
 * A point where `|f| < 1/k`; needs `f(a) < 0 < f(b)`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum CrStatus cr_ivt(const struct CrFunction *f, uint64_t k, char **out);

/**
 * The integral of `f` over its interval to within `1/k`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum CrStatus cr_integrate(const struct CrFunction *f, uint64_t k, char **out);

/**
 * Fan modulus of a built-in functional, searching prefixes up to `fuel`.
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be writable.
 */
enum CrStatus cr_fan_modulus(const char *name, uint64_t fuel, uint64_t *out);

/**
 * Least zero of `seq[0..len]` continued by 1s, found through an oracle
 * modulus functional; `-1` when there is none.
 *
 * # Safety
 * `seq` must point to `len` values (or be null with `len == 0`); `out` must
 * be writable.
 */
enum CrStatus cr_grilliot(enum CrMode mode, const uint64_t *seq, size_t len, int64_t *out);

/**
 * Library version, statically allocated.
 */
const char *cr_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CERTREAL_H */
