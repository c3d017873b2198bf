#ifndef CMDYN_H
#define CMDYN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmdynStatus {
  CMDYN_STATUS_OK = 0,
  /**
   * The computation ran but one of its checks failed.
   */
  CMDYN_STATUS_VERIFICATION_FAILED = 1,
  CMDYN_STATUS_INVALID_ARGUMENT = 2,
  CMDYN_STATUS_INTERNAL = 3,
  CMDYN_STATUS_NULL_POINTER = 4,
  CMDYN_STATUS_OUT_OF_RANGE = 5,
  CMDYN_STATUS_PANIC = 6,
} CmdynStatus;

/**
 * A complete factorization over the integers.
 */
typedef struct CmdynFactorization CmdynFactorization;

/**
 * An integer polynomial in one variable.
 */
typedef struct CmdynPoly CmdynPoly;

/**
 * The outcome of a pipeline command: a verdict plus a JSON document.
 */
typedef struct CmdynReport CmdynReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The
 * pointer stays valid until the next call into the library on this thread.
 */
const char *cmdyn_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void cmdyn_string_free(char *s);

/**
 * Parses `x^2 - 1` style text or the JSON form `{"var":"x","coeffs":[..]}`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CmdynStatus cmdyn_poly_parse(const char *text, struct CmdynPoly **out);

/**
 * # Safety
 * `p` must be NULL or a handle from this library, not yet freed.
 */
void cmdyn_poly_free(struct CmdynPoly *p);

/**
 * Degree, or -1 for the zero polynomial and for NULL.
 *
 * # Safety
 * `p` must be NULL or a live handle.
 */
int64_t cmdyn_poly_degree(const struct CmdynPoly *p);

/**
 * Coefficient of `x^i` in decimal.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CmdynStatus cmdyn_poly_coeff(const struct CmdynPoly *p, size_t i, char **out);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CmdynStatus cmdyn_poly_to_string(const struct CmdynPoly *p, char **out);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CmdynStatus cmdyn_poly_to_json(const struct CmdynPoly *p, char **out);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CmdynStatus cmdyn_factor(const struct CmdynPoly *p,
                              uint64_t seed,
                              struct CmdynFactorization **out);

/**
 * # Safety
 * `f` must be NULL or a handle from this library, not yet freed.
 */
void cmdyn_factorization_free(struct CmdynFactorization *f);

/**
 * Number of distinct irreducible factors; 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live handle.
 */
size_t cmdyn_factorization_len(const struct CmdynFactorization *f);

/**
 * Copies out factor `i` and its multiplicity. The returned polynomial is
 * a new handle.
 *
 * # Safety
 * `f` must be a live handle; `poly` and `mult` valid pointers.
 */
enum CmdynStatus cmdyn_factorization_get(const struct CmdynFactorization *f,
                                         size_t i,
                                         struct CmdynPoly **poly,
                                         uint32_t *mult);

/**
 * Class number of the order of discriminant `-d`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CmdynStatus cmdyn_class_number(uint64_t d, uint64_t *out);

/**
 * Class equation `H_{-d}` from complex multiplication.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CmdynStatus cmdyn_class_poly(uint64_t d, struct CmdynPoly **out);

/**
 * Factors `P_n` and labels its factors. `cache_dir` may be NULL. A report
 * is produced even when the status is `VerificationFailed`.
 *
 * # Safety
 * `cache_dir` must be NULL or a NUL-terminated string; `out` valid.
 */
enum CmdynStatus cmdyn_pn(uint32_t n,
                          const char *cache_dir,
                          uint64_t seed,
                          bool force,
                          struct CmdynReport **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum CmdynStatus cmdyn_deuring(uint32_t max_n, struct CmdynReport **out);

/**
 * # Safety
 * `cache_dir` must be NULL or a NUL-terminated string; `out` valid.
 */
enum CmdynStatus cmdyn_padic_verify(uint64_t d,
                                    uint32_t prec,
                                    const char *cache_dir,
                                    uint64_t seed,
                                    struct CmdynReport **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum CmdynStatus cmdyn_lambda_identity(size_t terms, uint64_t seed, struct CmdynReport **out);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
bool cmdyn_report_ok(const struct CmdynReport *r);

/**
 * Borrowed JSON text of the report, valid until the report is freed.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
const char *cmdyn_report_json(const struct CmdynReport *r);

/**
 * # Safety
 * `r` must be NULL or a handle from this library, not yet freed.
 */
void cmdyn_report_free(struct CmdynReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMDYN_H */
