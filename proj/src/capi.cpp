#include "sievemoments/sievemoments.h"

#include <cmath>
#include <new>
#include <string>

#include "sievemoments/chars.hpp"
#include "sievemoments/comb_linalg.hpp"
#include "sievemoments/core_arith.hpp"
#include "sievemoments/error.hpp"
#include "sievemoments/gfpoly.hpp"
#include "sievemoments/moments_int.hpp"
#include "sievemoments/perm.hpp"
#include "sievemoments/verify.hpp"
#include "sievemoments/weights.hpp"

using namespace sievemoments;

struct smo_context {
  ComputeOptions options;
  std::string error;
};

struct smo_value {
  Value value;
  std::string text;
};

namespace {

class NullArgument : public UsageError {
 public:
  NullArgument() : UsageError("null pointer argument") {}
};

template <class... P>
void require(P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument();
}

template <class F>
smo_status guard(smo_context* ctx, F&& fn) {
  if (!ctx) return SMO_INVALID_ARGUMENT;
  ctx->error.clear();
  try {
    fn();
    return SMO_OK;
  } catch (const UsageError& e) {
    ctx->error = e.what();
    return SMO_INVALID_ARGUMENT;
  } catch (const ScaleError& e) {
    ctx->error = e.what();
    return SMO_SCALE;
  } catch (const DomainError& e) {
    ctx->error = e.what();
    return SMO_DOMAIN;
  } catch (const ResourceError& e) {
    ctx->error = e.what();
    return SMO_RESOURCE;
  } catch (const std::bad_alloc&) {
    ctx->error = "out of memory";
    return SMO_RESOURCE;
  } catch (const std::exception& e) {
    ctx->error = e.what();
    return SMO_INTERNAL;
  } catch (...) {
    ctx->error = "unknown failure";
    return SMO_INTERNAL;
  }
}

WeightFunction to_weight(smo_weight w) {
  switch (w.kind) {
    case SMO_WEIGHT_SHARP: return WeightFunction::sharp();
    case SMO_WEIGHT_POWER: return WeightFunction::power(w.A);
    case SMO_WEIGHT_DYADIC: return WeightFunction::dyadic();
  }
  throw UsageError("unknown weight kind");
}

smo_value* wrap(Value v) {
  auto* out = new smo_value{std::move(v), {}};
  out->text = out->value.to_string();
  return out;
}

smo_value* wrap(const mpq_class& q) { return wrap(Value(q)); }
smo_value* wrap(const mpz_class& z) { return wrap(Value(mpq_class(z))); }

}  // namespace

extern "C" {

smo_status smo_context_create(smo_context** out) {
  if (!out) return SMO_INVALID_ARGUMENT;
  try {
    *out = new smo_context();
  } catch (...) {
    return SMO_RESOURCE;
  }
  return SMO_OK;
}

void smo_context_destroy(smo_context* ctx) { delete ctx; }

smo_status smo_set_threads(smo_context* ctx, unsigned threads) {
  return guard(ctx, [&] {
    if (threads == 0) throw UsageError("threads must be >= 1");
    ctx->options.threads = threads;
  });
}

smo_status smo_set_divisor_cap(smo_context* ctx, uint64_t cap) {
  return guard(ctx, [&] {
    if (cap == 0) throw UsageError("divisor cap must be positive");
    ctx->options.divisor_cap = cap;
  });
}

smo_status smo_set_tuple_cap(smo_context* ctx, uint64_t cap) {
  return guard(ctx, [&] {
    if (cap == 0) throw UsageError("tuple cap must be positive");
    ctx->options.tuple_cap = cap;
  });
}

smo_status smo_set_kernel(smo_context* ctx, smo_kernel kernel) {
  return guard(ctx, [&] {
    if (kernel != SMO_KERNEL_BINOMIAL && kernel != SMO_KERNEL_PLAIN) throw UsageError("unknown kernel");
    ctx->options.kernel = kernel == SMO_KERNEL_PLAIN ? KernelVariant::Plain : KernelVariant::Binomial;
  });
}

const char* smo_last_error(const smo_context* ctx) { return ctx ? ctx->error.c_str() : "null context"; }

const char* smo_status_name(smo_status status) {
  switch (status) {
    case SMO_OK: return "ok";
    case SMO_INVALID_ARGUMENT: return "invalid argument";
    case SMO_SCALE: return "scale limit";
    case SMO_DOMAIN: return "domain error";
    case SMO_RESOURCE: return "resource error";
    case SMO_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void smo_value_destroy(smo_value* v) { delete v; }
int smo_value_is_exact(const smo_value* v) { return v && v->value.is_exact(); }
const char* smo_value_string(const smo_value* v) { return v ? v->text.c_str() : ""; }
double smo_value_double(const smo_value* v) { return v ? v->value.to_double() : NAN; }

smo_status smo_mobius(smo_context* ctx, uint64_t n, int* out) {
  return guard(ctx, [&] {
    require(out);
    if (n == 0) throw UsageError("mobius needs n >= 1");
    *out = mobius(n);
  });
}

smo_status smo_factor(smo_context* ctx, uint64_t n, uint64_t* primes, unsigned* exponents, size_t cap,
                      size_t* count) {
  return guard(ctx, [&] {
    require(count);
    if (n == 0) throw UsageError("factor needs n >= 1");
    const auto f = factor(n);
    *count = f.factors().size();
    if (cap > 0) require(primes, exponents);
    for (size_t i = 0; i < f.factors().size() && i < cap; ++i) {
      primes[i] = f.factors()[i].prime;
      exponents[i] = f.factors()[i].exponent;
    }
  });
}

smo_status smo_omega(smo_context* ctx, uint64_t n, uint64_t r, uint64_t R, unsigned* out) {
  return guard(ctx, [&] {
    require(out);
    if (n == 0) throw UsageError("omega needs n >= 1");
    *out = omega_upto(factor(n), r, R);
  });
}

smo_status smo_eval_weight(smo_context* ctx, smo_weight w, double t, double* out) {
  return guard(ctx, [&] {
    require(out);
    *out = eval_weight(to_weight(w), t);
  });
}

smo_status smo_divisor_sum(smo_context* ctx, uint64_t n, smo_weight w, double R, smo_value** out) {
  return guard(ctx, [&] {
    require(out);
    if (n == 0) throw UsageError("divisor_sum needs n >= 1");
    *out = wrap(divisor_sum(factor(n), to_weight(w), R, ctx->options.divisor_cap));
  });
}

smo_status smo_dyadic_identity(smo_context* ctx, uint64_t m, double R, int* holds) {
  return guard(ctx, [&] {
    require(holds);
    *holds = dyadic_identity_check(m, R) ? 1 : 0;
  });
}

smo_status smo_multi_difference(smo_context* ctx, smo_weight w, double x, const double* h, size_t len,
                                double* out) {
  return guard(ctx, [&] {
    require(out);
    if (len > 0) require(h);
    *out = multi_difference(to_weight(w), x, std::span<const double>(h, len));
  });
}

smo_status smo_mellin_closed(smo_context* ctx, unsigned A, double R, double s_re, double s_im, double* re,
                             double* im) {
  return guard(ctx, [&] {
    require(re, im);
    const auto z = mellin_power_closed(A, R, {s_re, s_im});
    *re = z.real();
    *im = z.imag();
  });
}

smo_status smo_mellin_numeric(smo_context* ctx, smo_weight w, double R, double s_re, double s_im, double* re,
                              double* im) {
  return guard(ctx, [&] {
    require(re, im);
    const auto z = mellin_numeric(to_weight(w), R, {s_re, s_im});
    *re = z.real();
    *im = z.imag();
  });
}

smo_status smo_moment(smo_context* ctx, smo_weight w, double R, unsigned k, smo_algorithm algorithm,
                      smo_value** out, uint64_t* terms) {
  return guard(ctx, [&] {
    require(out);
    MomentResult r;
    if (algorithm == SMO_ALGO_DIRECT)
      r = moment_direct(to_weight(w), R, k, ctx->options);
    else if (algorithm == SMO_ALGO_GROUPED)
      r = moment_grouped(to_weight(w), R, k, ctx->options);
    else
      throw UsageError("unknown moment algorithm");
    if (terms) *terms = r.terms;
    *out = wrap(r.value);
  });
}

smo_status smo_empirical_moment(smo_context* ctx, smo_weight w, double R, unsigned k, uint64_t x,
                                int with_reference, smo_empirical* out) {
  return guard(ctx, [&] {
    require(out);
    const auto e = empirical_moment(to_weight(w), R, k, x, ctx->options, with_reference != 0);
    *out = {e.value, e.reference, e.envelope_constant};
  });
}

smo_status smo_restricted_moment(smo_context* ctx, smo_weight w, double R, unsigned k, uint64_t x,
                                 unsigned omega_lo, unsigned omega_hi, double* out) {
  return guard(ctx, [&] {
    require(out);
    *out = restricted_moment(to_weight(w), R, k, x, OmegaInterval{omega_lo, omega_hi}, ctx->options);
  });
}

smo_status smo_support_count(smo_context* ctx, double R, uint64_t x, uint64_t* out) {
  return guard(ctx, [&] {
    require(out);
    *out = support_count(R, x, ctx->options);
  });
}

smo_status smo_h_count(smo_context* ctx, uint64_t X, uint64_t Y, uint64_t Z, uint64_t W, uint64_t* out) {
  return guard(ctx, [&] {
    require(out);
    *out = h_count(X, Y, Z, W, ctx->options);
  });
}

smo_status smo_moment_exponent(smo_context* ctx, unsigned k, unsigned A, int* out) {
  return guard(ctx, [&] {
    require(out);
    *out = moment_exponent(k, A);
  });
}

smo_status smo_m_kernel(smo_context* ctx, const unsigned* counts, size_t len, unsigned r, smo_value** out) {
  return guard(ctx, [&] {
    require(out);
    if (len > 0) require(counts);
    CycleType c;
    c.counts.assign(counts, counts + len);
    *out = wrap(m_kernel(c, r, ctx->options.kernel));
  });
}

smo_status smo_perm_moment(smo_context* ctx, unsigned N, unsigned m, unsigned k, smo_value** out) {
  return guard(ctx, [&] {
    require(out);
    *out = wrap(perm_moment_bruteforce(N, m, k, ctx->options.kernel));
  });
}

smo_status smo_c_count(smo_context* ctx, unsigned m, unsigned k, smo_value** out) {
  return guard(ctx, [&] {
    require(out);
    *out = wrap(c_count(m, k));
  });
}

smo_status smo_poisson_moment(smo_context* ctx, unsigned m, unsigned k, double tol, double* value,
                              double* tail_bound) {
  return guard(ctx, [&] {
    require(value);
    const auto p = poisson_moment(m, k, tol, ctx->options.kernel);
    *value = p.value;
    if (tail_bound) *tail_bound = p.tail_bound;
  });
}

smo_status smo_short_cycle_density(smo_context* ctx, unsigned N, unsigned m, smo_value** density, double* limit,
                                   double* constant) {
  return guard(ctx, [&] {
    require(density);
    const auto d = no_short_cycle_density(N, m);
    if (limit) *limit = d.limit;
    if (constant) *constant = d.constant;
    *density = wrap(d.density);
  });
}

smo_status smo_irreducible_counts(smo_context* ctx, uint32_t q, unsigned max_degree, uint64_t* counts) {
  return guard(ctx, [&] {
    require(counts);
    const auto t = sieve_irreducibles(q, max_degree);
    for (unsigned d = 1; d <= max_degree; ++d) counts[d - 1] = t.by_degree[d].size();
  });
}

smo_status smo_poly_bruteforce(smo_context* ctx, uint32_t q, unsigned n, unsigned m, unsigned k, unsigned h,
                               smo_value** out) {
  return guard(ctx, [&] {
    require(out);
    *out = wrap(poly_moment_bruteforce(q, n, m, k, h, ctx->options));
  });
}

smo_status smo_poly_cycleformula(smo_context* ctx, uint32_t q, unsigned m, unsigned k, smo_value** out) {
  return guard(ctx, [&] {
    require(out);
    *out = wrap(poly_moment_cycleformula(q, m, k, ctx->options));
  });
}

smo_status smo_combprop(smo_context* ctx, unsigned k, uint64_t samples, uint64_t seed, smo_combprop_report* out) {
  return guard(ctx, [&] {
    require(out);
    const auto r = verify_combprop(k, samples, seed);
    *out = {r.distinct,       r.violations_a,      r.violations_b,          r.violations_c,
            r.equality_count, r.equality_expected, r.equality_matches ? 1 : 0, r.exhaustive ? 1 : 0};
  });
}

smo_status smo_script_a(smo_context* ctx, const long* forms, size_t rows, unsigned dims, long* value,
                        unsigned* dim) {
  return guard(ctx, [&] {
    require(value);
    if (rows > 0) require(forms);
    std::vector<LinearForm> gens;
    for (size_t r = 0; r < rows; ++r)
      gens.push_back(LinearForm::from_ints(std::vector<long>(forms + r * dims, forms + (r + 1) * dims)));
    const auto V = span(gens, dims);
    *value = script_A(V);
    if (dim) *dim = V.dim();
  });
}

smo_status smo_m_lambda(smo_context* ctx, double lambda, double* out) {
  return guard(ctx, [&] {
    require(out);
    *out = m_lambda(lambda);
  });
}

smo_status smo_chi(smo_context* ctx, int64_t D, uint64_t n, int* out) {
  return guard(ctx, [&] {
    require(out);
    *out = RealCharacter(D)(n);
  });
}

smo_status smo_char_moment(smo_context* ctx, int64_t D, double R, unsigned k, smo_char_algorithm algorithm,
                           smo_value** out) {
  return guard(ctx, [&] {
    require(out);
    const auto algo =
        algorithm == SMO_CHAR_LOCAL_FACTORS ? CharMomentAlgorithm::LocalFactors : CharMomentAlgorithm::Direct;
    *out = wrap(char_moment(RealCharacter(D), R, k, algo, ctx->options));
  });
}

smo_status smo_l_one(smo_context* ctx, int64_t D, uint64_t terms, double* value, double* bound) {
  return guard(ctx, [&] {
    require(value);
    const auto l = l_one(RealCharacter(D), terms);
    *value = l.value;
    if (bound) *bound = l.bound;
  });
}

smo_status smo_vk_volume(smo_context* ctx, unsigned k, double m, uint64_t samples, uint64_t seed, smo_volume* out) {
  return guard(ctx, [&] {
    require(out);
    const auto v = vk_volume(k, m, samples, seed, ctx->options);
    *out = {v.mean, v.stderr_, v.samples, v.seed, v.hits};
  });
}

smo_status smo_singular_series(smo_context* ctx, int64_t D, unsigned k, uint64_t cutoff, smo_singular* out) {
  return guard(ctx, [&] {
    require(out);
    const auto s = singular_series(RealCharacter(D), k, cutoff);
    *out = {s.value, s.truncated_product, s.tail_bound, s.l_one, s.ratio_to_l_power, s.exponent};
  });
}

smo_status smo_verify(smo_context* ctx, int full, const int* only, size_t only_len, smo_verify_callback cb,
                      void* user, int* all_passed) {
  return guard(ctx, [&] {
    if (only_len > 0) require(only);
    VerifyOptions opt;
    opt.full = full != 0;
    opt.threads = ctx->options.threads;
    opt.kernel = ctx->options.kernel;
    opt.only.assign(only, only + only_len);
    const auto results = run_verify(opt, [&](const CheckResult& r) {
      if (!cb) return;
      const smo_check c{r.id, r.name.c_str(), r.passed ? 1 : 0, r.soft ? 1 : 0, r.detail.c_str(), r.seconds};
      cb(&c, user);
    });
    if (all_passed) *all_passed = all_hard_passed(results) ? 1 : 0;
  });
}

}  // extern "C"
