#include "sidak/extended_real.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sidak {
namespace {

mpfr_prec_t digits_to_bits(unsigned digits) {
  // log2(10) ~ 3.3219; a few guard bits on top.
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 8;
}

}  // namespace

ExtendedReal::ExtendedReal(unsigned digits) : digits_(digits) {
  mpfr_init2(value_, digits_to_bits(digits));
  mpfr_set_zero(value_, 1);
}

ExtendedReal::ExtendedReal(double value, unsigned digits) : digits_(digits) {
  mpfr_init2(value_, digits_to_bits(digits));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

ExtendedReal::ExtendedReal(const mpz_class& value, unsigned digits) : digits_(digits) {
  mpfr_init2(value_, digits_to_bits(digits));
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

ExtendedReal::ExtendedReal(const mpq_class& value, unsigned digits) : digits_(digits) {
  mpfr_init2(value_, digits_to_bits(digits));
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

ExtendedReal::ExtendedReal(const ExtendedReal& other) : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

ExtendedReal::ExtendedReal(ExtendedReal&& other) noexcept : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

ExtendedReal& ExtendedReal::operator=(const ExtendedReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
    digits_ = other.digits_;
  }
  return *this;
}

ExtendedReal& ExtendedReal::operator=(ExtendedReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  std::swap(digits_, other.digits_);
  return *this;
}

ExtendedReal::~ExtendedReal() { mpfr_clear(value_); }

void ExtendedReal::raise_precision(unsigned digits) {
  if (digits <= digits_) return;
  mpfr_prec_round(value_, digits_to_bits(digits), MPFR_RNDN);
  digits_ = digits;
}

double ExtendedReal::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string ExtendedReal::to_string(int significant_digits) const {
  std::vector<char> buffer(static_cast<std::size_t>(significant_digits) + 32);
  mpfr_snprintf(buffer.data(), buffer.size(), "%.*Rg", significant_digits, value_);
  return buffer.data();
}

bool ExtendedReal::is_zero() const { return mpfr_zero_p(value_) != 0; }

int ExtendedReal::sign() const { return mpfr_sgn(value_); }

ExtendedReal& ExtendedReal::operator+=(const ExtendedReal& rhs) {
  raise_precision(rhs.digits_);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtendedReal& ExtendedReal::operator-=(const ExtendedReal& rhs) {
  raise_precision(rhs.digits_);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtendedReal& ExtendedReal::operator*=(const ExtendedReal& rhs) {
  raise_precision(rhs.digits_);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtendedReal& ExtendedReal::operator/=(const ExtendedReal& rhs) {
  raise_precision(rhs.digits_);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtendedReal& ExtendedReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

ExtendedReal ExtendedReal::operator-() const {
  ExtendedReal out(*this);
  mpfr_neg(out.value_, out.value_, MPFR_RNDN);
  return out;
}

bool operator<(const ExtendedReal& a, const ExtendedReal& b) { return mpfr_less_p(a.value_, b.value_) != 0; }

ExtendedReal log(const ExtendedReal& x) {
  ExtendedReal out(x.digits_);
  mpfr_log(out.value_, x.value_, MPFR_RNDN);
  return out;
}

ExtendedReal exp(const ExtendedReal& x) {
  ExtendedReal out(x.digits_);
  mpfr_exp(out.value_, x.value_, MPFR_RNDN);
  return out;
}

ExtendedReal abs(const ExtendedReal& x) {
  ExtendedReal out(x.digits_);
  mpfr_abs(out.value_, x.value_, MPFR_RNDN);
  return out;
}

ExtendedReal log_gamma(const ExtendedReal& x) {
  ExtendedReal out(x.digits_);
  mpfr_lngamma(out.value_, x.value_, MPFR_RNDN);
  return out;
}

}  // namespace sidak
