#ifndef MOTIVIC_H
#define MOTIVIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum {
  MOTIVIC_STATUS_OK = 0,
  MOTIVIC_STATUS_NULL_POINTER = 1,
  MOTIVIC_STATUS_INVALID_UTF8 = 2,
  MOTIVIC_STATUS_USAGE = 3,
  MOTIVIC_STATUS_PARSE = 4,
  MOTIVIC_STATUS_INVALID_FIELD = 5,
  MOTIVIC_STATUS_INVALID_MOTIVE = 6,
  MOTIVIC_STATUS_COMPUTATION = 7,
  MOTIVIC_STATUS_VERIFICATION_FAILED = 8,
  MOTIVIC_STATUS_PANIC = 9,
} MotivicStatus;

/**
 * A finite field F_q.
 */
typedef struct MotivicField MotivicField;

/**
 * An Anderson t-module with its coefficient streams.
 */
typedef struct MotivicModule MotivicModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *motivic_last_error(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void motivic_string_free(char *s);

/**
 * Create F_q for a prime power q <= 256.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
MotivicStatus motivic_field_new(uint32_t q, MotivicField **out);

/**
 * # Safety
 * `f` must come from `motivic_field_new` and not have been freed.
 */
void motivic_field_free(MotivicField *f);

/**
 * The Carlitz tensor power C^{⊗n} over `field`.
 *
 * # Safety
 * `field` and `out` must be valid pointers.
 */
MotivicStatus motivic_module_carlitz(const MotivicField *field, uint32_t n, MotivicModule **out);

/**
 * The module attached to ζ_A(1,3) over F_2.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
MotivicStatus motivic_module_mzv13(MotivicModule **out);

/**
 * A module from its motive JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
MotivicStatus motivic_module_from_json(const char *json, MotivicModule **out);

/**
 * # Safety
 * `m` must come from a `motivic_module_*` constructor and not have been freed.
 */
void motivic_module_free(MotivicModule *m);

/**
 * Dimension of the module, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a valid module handle.
 */
uintptr_t motivic_module_dim(const MotivicModule *m);

/**
 * Exponential coefficient Q_i as a JSON matrix of rational functions.
 *
 * # Safety
 * `m` and `out` must be valid pointers.
 */
MotivicStatus motivic_exp_coeff_json(const MotivicModule *m, uint32_t i, char **out);

/**
 * Logarithm coefficient P_i as a JSON matrix of rational functions.
 *
 * # Safety
 * `m` and `out` must be valid pointers.
 */
MotivicStatus motivic_log_coeff_json(const MotivicModule *m, uint32_t i, char **out);

/**
 * ζ_A(n) to u-adic precision `prec`, as JSON.
 *
 * # Safety
 * `field` and `out` must be valid pointers.
 */
MotivicStatus motivic_zeta_json(const MotivicField *field, uint64_t n, int64_t prec, char **out);

/**
 * Run a command-line invocation given as a JSON array of arguments
 * (without the program name), writing the JSON report to `out`. Returns
 * `VerificationFailed` when the report contains a failed check; the report
 * is written in that case too.
 *
 * # Safety
 * `args_json` must be a NUL-terminated string and `out` a valid pointer.
 */
MotivicStatus motivic_run_json(const char *args_json, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MOTIVIC_H */
