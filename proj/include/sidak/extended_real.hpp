#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace sidak {

/// Software floating point with a per-value precision given in decimal
/// digits. Thin RAII handle over an MPFR number; binary operations round to
/// the larger precision of the two operands.
class ExtendedReal {
 public:
  explicit ExtendedReal(unsigned digits = 50);
  ExtendedReal(double value, unsigned digits);
  ExtendedReal(const mpz_class& value, unsigned digits);
  ExtendedReal(const mpq_class& value, unsigned digits);

  ExtendedReal(const ExtendedReal& other);
  ExtendedReal(ExtendedReal&& other) noexcept;
  ExtendedReal& operator=(const ExtendedReal& other);
  ExtendedReal& operator=(ExtendedReal&& other) noexcept;
  ~ExtendedReal();

  unsigned digits() const noexcept { return digits_; }
  double to_double() const;
  std::string to_string(int significant_digits = 30) const;

  bool is_zero() const;
  int sign() const;

  ExtendedReal& operator+=(const ExtendedReal& rhs);
  ExtendedReal& operator-=(const ExtendedReal& rhs);
  ExtendedReal& operator*=(const ExtendedReal& rhs);
  ExtendedReal& operator/=(const ExtendedReal& rhs);
  ExtendedReal& operator*=(long rhs);
  ExtendedReal operator-() const;

  friend ExtendedReal operator+(ExtendedReal lhs, const ExtendedReal& rhs) { return lhs += rhs; }
  friend ExtendedReal operator-(ExtendedReal lhs, const ExtendedReal& rhs) { return lhs -= rhs; }
  friend ExtendedReal operator*(ExtendedReal lhs, const ExtendedReal& rhs) { return lhs *= rhs; }
  friend ExtendedReal operator/(ExtendedReal lhs, const ExtendedReal& rhs) { return lhs /= rhs; }

  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b);
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }

  friend ExtendedReal log(const ExtendedReal& x);
  friend ExtendedReal exp(const ExtendedReal& x);
  friend ExtendedReal abs(const ExtendedReal& x);
  friend ExtendedReal log_gamma(const ExtendedReal& x);

  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

 private:
  void raise_precision(unsigned digits);

  mpfr_t value_;
  unsigned digits_;
};

}  // namespace sidak
