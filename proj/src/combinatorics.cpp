#include "sidak/combinatorics.hpp"

#include <mpfr.h>

#include <boost/math/special_functions/gamma.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sidak/errors.hpp"

namespace sidak {
namespace {

constexpr long kFactorialCacheCap = 2000;

const std::vector<BigInt>& factorial_table() {
  static const std::vector<BigInt> table = [] {
    std::vector<BigInt> out(kFactorialCacheCap + 1);
    out[0] = 1;
    for (long j = 1; j <= kFactorialCacheCap; ++j) out[j] = out[j - 1] * j;
    return out;
  }();
  return table;
}

struct Pass {
  ExtendedReal sum;
  double max_log = -std::numeric_limits<double>::infinity();
  bool any_nonzero = false;
};

Pass run_pass(std::size_t count, const TermGenerator& terms, unsigned digits) {
  Pass pass{ExtendedReal(digits)};
  ExtendedReal compensation(digits);
  for (std::size_t j = 0; j < count; ++j) {
    SignedLogTerm term = terms(j, digits);
    if (term.sign == 0) continue;
    pass.any_nonzero = true;
    const double lm = term.log_magnitude.to_double();
    if (lm > pass.max_log) pass.max_log = lm;
    ExtendedReal value = exp(term.log_magnitude);
    if (term.sign < 0) value = -value;
    // Neumaier's variant: the correction is taken from whichever operand is
    // larger in magnitude.
    ExtendedReal next = pass.sum + value;
    if (!(abs(pass.sum) < abs(value))) {
      compensation += (pass.sum - next) + value;
    } else {
      compensation += (value - next) + pass.sum;
    }
    pass.sum = std::move(next);
  }
  pass.sum += compensation;
  return pass;
}

double log10_abs(const ExtendedReal& x) { return log(abs(x)).to_double() / std::log(10.0); }

}  // namespace

BigRational make_rational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw DomainError("rational with zero denominator");
  BigRational q(numerator, denominator);
  q.canonicalize();
  return q;
}

BigInt binomial(long n, long k) {
  if (n < 0) throw DomainError("binomial: n must be nonnegative, got " + std::to_string(n));
  if (k < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

BigInt factorial(long n) {
  if (n < 0) throw DomainError("factorial of negative number " + std::to_string(n));
  if (n <= kFactorialCacheCap) return factorial_table()[static_cast<std::size_t>(n)];
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

long factorial_cache_cap() noexcept { return kFactorialCacheCap; }

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  return boost::math::lgamma(x);
}

BigRational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("not a decimal number: '" + std::string(text) + "'");
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    const char* first = text.data() + pos;
    if (pos < text.size() && text[pos] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), exponent);
    if (ec != std::errc{} || ptr == first) {
      throw ParseError("bad exponent in '" + std::string(text) + "'");
    }
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  if (pos != text.size()) throw ParseError("trailing characters in '" + std::string(text) + "'");

  BigInt numerator(digits, 10);
  if (negative) numerator = -numerator;
  const long power = exponent - scale;
  BigInt ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(power < 0 ? -power : power));
  return power >= 0 ? BigRational(numerator * ten_power) : make_rational(numerator, ten_power);
}

BigRational decimal_rational(double value) {
  if (!std::isfinite(value)) throw DomainError("decimal_rational: non-finite value");
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw DomainError("decimal_rational: formatting failed");
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

double to_double(const BigRational& value) {
  // Round to nearest; mpq_get_d truncates.
  mpfr_t rounded;
  mpfr_init2(rounded, 53);
  mpfr_set_q(rounded, value.get_mpq_t(), MPFR_RNDN);
  const double result = mpfr_get_d(rounded, MPFR_RNDN);
  mpfr_clear(rounded);
  return result;
}

void PrecisionPolicy::validate() const {
  if (base_digits < 30) throw DomainError("precision policy: base_digits must be >= 30");
  if (escalation_factor < 2) throw DomainError("precision policy: escalation_factor must be >= 2");
  if (!(cancellation_threshold > 0.0 && cancellation_threshold < 1.0)) {
    throw DomainError("precision policy: cancellation_threshold must lie in (0,1)");
  }
}

PrecisionPolicy PrecisionPolicy::from_environment() {
  PrecisionPolicy policy;
  if (const char* env = std::getenv("SIDAK_PRECISION"); env != nullptr && *env != '\0') {
    unsigned digits = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), digits);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw DomainError("SIDAK_PRECISION must be a positive integer, got '" + std::string(text) + "'");
    }
    policy.base_digits = digits;
  }
  policy.validate();
  return policy;
}

AlternatingSumResult alternating_sum(std::size_t count, const TermGenerator& terms,
                                     const PrecisionPolicy& policy) {
  policy.validate();
  const double threshold_log10 = std::log10(policy.cancellation_threshold);
  unsigned digits = policy.base_digits;
  std::optional<ExtendedReal> previous;

  for (unsigned escalation = 0; escalation <= policy.max_escalations; ++escalation) {
    Pass pass = run_pass(count, terms, digits);
    if (!pass.any_nonzero) return {ExtendedReal(digits), digits, escalation, 0.0};

    const double max_log10 = pass.max_log / std::log(10.0);
    const bool exact_zero = pass.sum.is_zero();
    const double lost = exact_zero ? std::numeric_limits<double>::infinity()
                                   : max_log10 - log10_abs(pass.sum);
    const double roundoff = static_cast<double>(count) * std::pow(10.0, -static_cast<double>(digits));

    if (!exact_zero && -lost >= threshold_log10) {
      return {std::move(pass.sum), digits, escalation, roundoff * std::pow(10.0, std::max(lost, 0.0))};
    }

    if (previous) {
      if (exact_zero && previous->is_zero()) return {std::move(pass.sum), digits, escalation, 0.0};
      if (!exact_zero) {
        const double change =
            (abs(pass.sum - *previous) / abs(pass.sum)).to_double();
        const double surviving = static_cast<double>(digits) - lost;
        if (change <= 1e-12 && surviving >= 20.0) {
          return {std::move(pass.sum), digits, escalation,
                  std::max(change, std::pow(10.0, -surviving))};
        }
      }
    }
    previous = std::move(pass.sum);
    digits *= policy.escalation_factor;
  }
  throw PrecisionError("alternating_sum: no stable result after " +
                       std::to_string(policy.max_escalations) + " precision escalations");
}

double alternating_sum(std::span<const SignedLogTermD> terms, const PrecisionPolicy& policy) {
  const TermGenerator generator = [&terms](std::size_t j, unsigned digits) {
    return SignedLogTerm{terms[j].sign, ExtendedReal(terms[j].log_magnitude, digits)};
  };
  return alternating_sum(terms.size(), generator, policy).value.to_double();
}

}  // namespace sidak
