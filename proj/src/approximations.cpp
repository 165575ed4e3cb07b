#include "sidak/approximations.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>

#include "sidak/errors.hpp"
#include "sidak/exceedance.hpp"

namespace sidak {

double nb_cdf_approx(int z, int s) {
  if (z < 0 || s < 0) throw DomainError("nb_cdf_approx: z and s must be nonnegative");
  const double shape = 2.0 * (s + 1);
  const double log_half = std::log(0.5);
  const double log_gamma_shape = log_gamma(shape);
  double sum = 0.0;
  for (int i = 0; i <= z; ++i) {
    // log C(shape+i-1, i) + (shape+i) log(1/2)
    const double log_term =
        log_gamma(shape + i) - log_gamma(i + 1.0) - log_gamma_shape + (shape + i) * log_half;
    sum += std::exp(log_term);
  }
  return std::min(sum, 1.0);
}

BigRational nb_cdf_exact(int z, int s) {
  if (z < 0 || s < 0) throw DomainError("nb_cdf_exact: z and s must be nonnegative");
  const long shape = 2L * (s + 1);
  BigRational sum = 0;
  for (long i = 0; i <= z; ++i) {
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), 2, static_cast<unsigned long>(shape + i));
    sum += make_rational(binomial(shape + i - 1, i), power);
  }
  return sum;
}

double sidak_asymptotic_tail(int c) { return to_double(sidak_asymptotic_tail_exact(c)); }

BigRational sidak_asymptotic_tail_exact(int c) {
  if (c < 0) throw DomainError("sidak_asymptotic_tail: c must be nonnegative");
  BigInt power;
  mpz_ui_pow_ui(power.get_mpz_t(), 2, static_cast<unsigned long>(c) + 1);
  return make_rational(BigInt(c + 2), power);
}

double chisq_degrees_of_freedom(int m, double rho, const ApproxConfig& config) {
  const int s = thresholds(m, 1, rho).s;
  const double base = s + 1.0;
  return config.df_mode == ChiSquareDf::matched ? 2.0 * base : base;
}

double chisq_tail_approx(int c, int m, double rho, const ApproxConfig& config) {
  if (c < 0) throw DomainError("chisq_tail_approx: c must be nonnegative");
  if (c == 0) return 1.0;
  const double df = chisq_degrees_of_freedom(m, rho, config);
  return boost::math::gamma_q(df / 2.0, c / 2.0);
}

}  // namespace sidak
