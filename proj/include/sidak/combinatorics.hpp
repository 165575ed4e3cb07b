#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "sidak/extended_real.hpp"

namespace sidak {

using BigInt = mpz_class;

/// Exact rational; gmp keeps results of arithmetic in lowest terms with a
/// positive denominator. Use `make_rational` when building one from parts.
using BigRational = mpq_class;

BigRational make_rational(const BigInt& numerator, const BigInt& denominator);

/// C(n, k) exactly. Zero when k < 0 or k > n, which lets piecewise
/// probability formulas vanish outside their support without special cases.
/// Throws DomainError for n < 0.
BigInt binomial(long n, long k);

/// n! exactly. Values up to the cache cap (default 2000) come from an
/// immutable table built on first use; larger ones are computed directly.
BigInt factorial(long n);

/// Largest n whose factorial is served from the cache.
long factorial_cache_cap() noexcept;

/// ln Gamma(x) for x > 0 in double precision. Throws DomainError otherwise.
double log_gamma(double x);

/// Parse a plain decimal literal ("0.05", "1e-3", "0.15") into the exact
/// rational it denotes.
BigRational parse_decimal(std::string_view text);

/// The rational denoted by the shortest decimal string that round-trips to
/// `value`. Turns 0.05 into exactly 1/20 rather than its binary expansion.
BigRational decimal_rational(double value);

double to_double(const BigRational& value);

// ---------------------------------------------------------------------------
// Alternating sums in extended precision.

struct PrecisionPolicy {
  unsigned base_digits = 50;
  unsigned escalation_factor = 2;
  double cancellation_threshold = 1e-8;
  unsigned max_escalations = 4;

  /// Throws DomainError unless base_digits >= 30 and escalation_factor >= 2.
  void validate() const;

  /// Default policy, with base_digits overridden by SIDAK_PRECISION when set.
  static PrecisionPolicy from_environment();
};

/// One summand given as sign * exp(log_magnitude). A zero term has sign 0.
struct SignedLogTerm {
  int sign = 0;
  ExtendedReal log_magnitude;
};

struct SignedLogTermD {
  int sign = 0;
  double log_magnitude = 0.0;
};

struct AlternatingSumResult {
  ExtendedReal value;
  unsigned digits_used = 0;
  unsigned escalations = 0;
  /// Estimated relative error of `value`.
  double relative_error = 0.0;
};

/// Produces term `index` evaluated with `digits` decimal digits of precision.
using TermGenerator = std::function<SignedLogTerm(std::size_t index, unsigned digits)>;

/// Neumaier-compensated sum of `count` generated terms. When the result is
/// smaller than cancellation_threshold times the largest term, the terms are
/// regenerated at escalated precision until two successive passes agree and
/// enough digits survive the cancellation. Throws PrecisionError past the cap.
AlternatingSumResult alternating_sum(std::size_t count, const TermGenerator& terms,
                                     const PrecisionPolicy& policy = {});

double alternating_sum(std::span<const SignedLogTermD> terms, const PrecisionPolicy& policy = {});

}  // namespace sidak
