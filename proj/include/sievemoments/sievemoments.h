/* C interface to the sievemoments library. All functions report failures
 * through smo_status; the message of the last failure on a context is
 * available from smo_last_error. Objects returned through out-pointers are
 * owned by the caller and released with the matching destroy function. */
#ifndef SIEVEMOMENTS_H
#define SIEVEMOMENTS_H

#include <stddef.h>
#include <stdint.h>

#if defined(SMO_BUILDING_LIBRARY)
#define SMO_API __attribute__((visibility("default")))
#else
#define SMO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SMO_OK = 0,
  SMO_INVALID_ARGUMENT = 1,
  SMO_SCALE = 2,
  SMO_DOMAIN = 3,
  SMO_RESOURCE = 4,
  SMO_INTERNAL = 5
} smo_status;

typedef enum { SMO_KERNEL_BINOMIAL = 0, SMO_KERNEL_PLAIN = 1 } smo_kernel;
typedef enum { SMO_WEIGHT_SHARP = 0, SMO_WEIGHT_POWER = 1, SMO_WEIGHT_DYADIC = 2 } smo_weight_kind;
typedef enum { SMO_ALGO_DIRECT = 0, SMO_ALGO_GROUPED = 1 } smo_algorithm;
typedef enum { SMO_CHAR_DIRECT = 0, SMO_CHAR_LOCAL_FACTORS = 1 } smo_char_algorithm;

typedef struct {
  smo_weight_kind kind;
  unsigned A; /* PowerSmooth exponent, >= 1; ignored otherwise */
} smo_weight;

typedef struct smo_context smo_context;
typedef struct smo_value smo_value;

SMO_API smo_status smo_context_create(smo_context** out);
SMO_API void smo_context_destroy(smo_context* ctx);
SMO_API smo_status smo_set_threads(smo_context* ctx, unsigned threads);
SMO_API smo_status smo_set_divisor_cap(smo_context* ctx, uint64_t cap);
SMO_API smo_status smo_set_tuple_cap(smo_context* ctx, uint64_t cap);
SMO_API smo_status smo_set_kernel(smo_context* ctx, smo_kernel kernel);
/* Message of the last failed call on ctx ("" if none). Valid until the next call. */
SMO_API const char* smo_last_error(const smo_context* ctx);
SMO_API const char* smo_status_name(smo_status status);

/* Exact rational ("p/q", or "p" for integers) or a double ("%.17g"). */
SMO_API void smo_value_destroy(smo_value* v);
SMO_API int smo_value_is_exact(const smo_value* v);
SMO_API const char* smo_value_string(const smo_value* v);
SMO_API double smo_value_double(const smo_value* v);

/* core arithmetic */
SMO_API smo_status smo_mobius(smo_context* ctx, uint64_t n, int* out);
/* Writes up to cap (prime, exponent) pairs; *count receives the number of distinct primes. */
SMO_API smo_status smo_factor(smo_context* ctx, uint64_t n, uint64_t* primes, unsigned* exponents, size_t cap,
                              size_t* count);
SMO_API smo_status smo_omega(smo_context* ctx, uint64_t n, uint64_t r, uint64_t R, unsigned* out);

/* weights */
SMO_API smo_status smo_eval_weight(smo_context* ctx, smo_weight w, double t, double* out);
SMO_API smo_status smo_divisor_sum(smo_context* ctx, uint64_t n, smo_weight w, double R, smo_value** out);
SMO_API smo_status smo_dyadic_identity(smo_context* ctx, uint64_t m, double R, int* holds);
SMO_API smo_status smo_multi_difference(smo_context* ctx, smo_weight w, double x, const double* h, size_t len,
                                        double* out);
SMO_API smo_status smo_mellin_closed(smo_context* ctx, unsigned A, double R, double s_re, double s_im,
                                     double* re, double* im);
SMO_API smo_status smo_mellin_numeric(smo_context* ctx, smo_weight w, double R, double s_re, double s_im,
                                      double* re, double* im);

/* integer moments */
SMO_API smo_status smo_moment(smo_context* ctx, smo_weight w, double R, unsigned k, smo_algorithm algorithm,
                              smo_value** out, uint64_t* terms);
typedef struct {
  double value;
  double reference; /* NaN when the exact moment is over the tuple cap */
  double envelope_constant;
} smo_empirical;
SMO_API smo_status smo_empirical_moment(smo_context* ctx, smo_weight w, double R, unsigned k, uint64_t x,
                                        int with_reference, smo_empirical* out);
SMO_API smo_status smo_restricted_moment(smo_context* ctx, smo_weight w, double R, unsigned k, uint64_t x,
                                         unsigned omega_lo, unsigned omega_hi, double* out);
SMO_API smo_status smo_support_count(smo_context* ctx, double R, uint64_t x, uint64_t* out);
SMO_API smo_status smo_h_count(smo_context* ctx, uint64_t X, uint64_t Y, uint64_t Z, uint64_t W, uint64_t* out);
SMO_API smo_status smo_moment_exponent(smo_context* ctx, unsigned k, unsigned A, int* out);

/* permutations */
SMO_API smo_status smo_m_kernel(smo_context* ctx, const unsigned* counts, size_t len, unsigned r, smo_value** out);
SMO_API smo_status smo_perm_moment(smo_context* ctx, unsigned N, unsigned m, unsigned k, smo_value** out);
SMO_API smo_status smo_c_count(smo_context* ctx, unsigned m, unsigned k, smo_value** out);
SMO_API smo_status smo_poisson_moment(smo_context* ctx, unsigned m, unsigned k, double tol, double* value,
                                      double* tail_bound);
SMO_API smo_status smo_short_cycle_density(smo_context* ctx, unsigned N, unsigned m, smo_value** density,
                                           double* limit, double* constant);

/* polynomials over F_q */
SMO_API smo_status smo_irreducible_counts(smo_context* ctx, uint32_t q, unsigned max_degree, uint64_t* counts);
SMO_API smo_status smo_poly_bruteforce(smo_context* ctx, uint32_t q, unsigned n, unsigned m, unsigned k, unsigned h,
                                       smo_value** out);
SMO_API smo_status smo_poly_cycleformula(smo_context* ctx, uint32_t q, unsigned m, unsigned k, smo_value** out);

/* linear algebra */
typedef struct {
  uint64_t distinct;
  uint64_t violations_a, violations_b, violations_c;
  uint64_t equality_count, equality_expected;
  int equality_matches;
  int exhaustive;
} smo_combprop_report;
SMO_API smo_status smo_combprop(smo_context* ctx, unsigned k, uint64_t samples, uint64_t seed,
                                smo_combprop_report* out);
/* forms: rows x dims integer matrix (row-major) spanning V; returns A(V) and dim V */
SMO_API smo_status smo_script_a(smo_context* ctx, const long* forms, size_t rows, unsigned dims, long* value,
                                unsigned* dim);
SMO_API smo_status smo_m_lambda(smo_context* ctx, double lambda, double* out);

/* characters */
SMO_API smo_status smo_chi(smo_context* ctx, int64_t D, uint64_t n, int* out);
SMO_API smo_status smo_char_moment(smo_context* ctx, int64_t D, double R, unsigned k, smo_char_algorithm algorithm,
                                   smo_value** out);
SMO_API smo_status smo_l_one(smo_context* ctx, int64_t D, uint64_t terms, double* value, double* bound);
typedef struct {
  double mean, stderr_;
  uint64_t samples, seed, hits;
} smo_volume;
SMO_API smo_status smo_vk_volume(smo_context* ctx, unsigned k, double m, uint64_t samples, uint64_t seed,
                                 smo_volume* out);
typedef struct {
  double value, truncated_product, tail_bound, l_one, ratio_to_l_power;
  unsigned exponent;
} smo_singular;
SMO_API smo_status smo_singular_series(smo_context* ctx, int64_t D, unsigned k, uint64_t cutoff, smo_singular* out);

/* acceptance battery */
typedef struct {
  int id;
  const char* name;
  int passed;
  int soft;
  const char* detail;
  double seconds;
} smo_check;
typedef void (*smo_verify_callback)(const smo_check* check, void* user);
/* only/only_len select criteria (NULL/0 = all). *all_passed ignores soft checks. */
SMO_API smo_status smo_verify(smo_context* ctx, int full, const int* only, size_t only_len, smo_verify_callback cb,
                              void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
