/*
 * cyclic_zeta: L-polynomials of cyclic covers y^r = F(x) over prime fields.
 *
 * All functions returning cz_status leave a message retrievable with
 * cz_last_error() on failure (thread-local). Big integers are exchanged as
 * decimal strings owned by the handle they came from.
 */
#ifndef CYCLIC_ZETA_H
#define CYCLIC_ZETA_H

#include <stddef.h>
#include <stdint.h>

#if defined(CZ_BUILDING_LIBRARY)
#define CZ_API __attribute__((visibility("default")))
#else
#define CZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cz_status {
  CZ_OK = 0,
  /* input errors */
  CZ_ERR_NOT_PRIME = 1,
  CZ_ERR_NOT_SQUAREFREE = 2,
  CZ_ERR_LEADING_COEFF_VANISHES = 3,
  CZ_ERR_P_TOO_SMALL = 4,
  CZ_ERR_DEGENERATE_COVER = 5,
  CZ_ERR_INVALID_ARGUMENT = 6,
  CZ_ERR_TOO_LARGE = 7,
  CZ_ERR_UNSUPPORTED = 8,
  /* failed internal checks */
  CZ_ERR_NON_UNIT = 20,
  CZ_ERR_INEXACT_DIVISION = 21,
  CZ_ERR_PRECISION_EXHAUSTED = 22,
  CZ_ERR_NOT_COPRIME = 23,
  CZ_ERR_SINGULAR_NODES = 24,
  CZ_ERR_UNEXPECTED_ZERO_DENOMINATOR = 25,
  CZ_ERR_INTEGRALITY_VIOLATION = 26,
  CZ_ERR_PRECONDITION_FAILED = 27,
  CZ_ERR_LIFT_AMBIGUOUS = 28,
  CZ_ERR_BOUND_VIOLATED = 29,
  CZ_ERR_NON_INTEGRAL_COEFFICIENT = 30,
  CZ_ERR_INTERNAL = 31,
  CZ_ERR_OUT_OF_MEMORY = 32
} cz_status;

typedef enum cz_strategy {
  CZ_STRATEGY_AUTO = 0,
  CZ_STRATEGY_BSGS = 1,
  CZ_STRATEGY_NAIVE = 2
} cz_strategy;

typedef enum cz_phase {
  CZ_PHASE_EXPANSION = 0,
  CZ_PHASE_HORIZONTAL = 1,
  CZ_PHASE_VERTICAL = 2,
  CZ_PHASE_LIFT = 3
} cz_phase;

typedef struct cz_options {
  cz_strategy strategy;
  int interpolation; /* nonzero: interpolate horizontal interval matrices */
  int threads;       /* worker threads, >= 1 */
} cz_options;

typedef struct cz_curve cz_curve;
typedef struct cz_result cz_result;

CZ_API void cz_options_init(cz_options* opts);
CZ_API const char* cz_status_name(cz_status s);
/* 1 if the status reports bad input rather than a failed internal check. */
CZ_API int cz_status_is_validation(cz_status s);
CZ_API const char* cz_last_error(void);

/* coeffs: ascending coefficients of F. n_override <= 0 selects N automatically. */
CZ_API cz_status cz_curve_new(uint64_t p, int r, const int64_t* coeffs, size_t ncoeffs, int n_override,
                              cz_curve** out);
CZ_API void cz_curve_free(cz_curve* c);
CZ_API int cz_curve_degree(const cz_curve* c);
CZ_API int cz_curve_genus(const cz_curve* c);
CZ_API int cz_curve_delta(const cz_curve* c);
CZ_API int cz_curve_precision(const cz_curve* c);
/* Brute-force count over F_{p^i}, i <= 3, p^i <= 10^8. */
CZ_API cz_status cz_curve_oracle_count(const cz_curve* c, int i, uint64_t* out);

/* opts may be NULL for defaults. */
CZ_API cz_status cz_compute(const cz_curve* c, const cz_options* opts, cz_result** out);
CZ_API void cz_result_free(cz_result* res);
CZ_API int cz_result_genus(const cz_result* res);
CZ_API int cz_result_precision(const cz_result* res);
CZ_API cz_strategy cz_result_strategy(const cz_result* res);
CZ_API int cz_result_charpoly_ok(const cz_result* res);
/* L(t) = a_0 + a_1 t + ... + a_2g t^2g */
CZ_API size_t cz_result_lpoly_len(const cz_result* res);
CZ_API const char* cz_result_lpoly_coeff(const cz_result* res, size_t i);
/* t^2g L(1/t), ascending */
CZ_API size_t cz_result_frobpoly_len(const cz_result* res);
CZ_API const char* cz_result_frobpoly_coeff(const cz_result* res, size_t i);
/* U(t), ascending */
CZ_API size_t cz_result_u_len(const cz_result* res);
CZ_API int64_t cz_result_u_coeff(const cz_result* res, size_t i);
/* Frobenius matrix mod p^N, entries in [0, p^N). */
CZ_API size_t cz_result_matrix_size(const cz_result* res);
CZ_API const char* cz_result_matrix_entry(const cz_result* res, size_t row, size_t col);
CZ_API double cz_result_timing_ms(const cz_result* res, cz_phase phase);
CZ_API size_t cz_result_note_count(const cz_result* res);
CZ_API const char* cz_result_note(const cz_result* res, size_t i);
/* #C(F_{p^i}) from L as a decimal string written into buf. */
CZ_API cz_status cz_result_point_count(const cz_result* res, int i, char* buf, size_t buflen);

#ifdef __cplusplus
}
#endif

#endif /* CYCLIC_ZETA_H */
