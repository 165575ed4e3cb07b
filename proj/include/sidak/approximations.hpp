#pragma once

#include "sidak/combinatorics.hpp"

namespace sidak {

/// Negative-binomial large-sample approximation to P(V <= z) for m/n near 1:
///   sum_{i=0}^{z} C(2(s+1)+i-1, i) 2^{-2(s+1)} 2^{-i}.
double nb_cdf_approx(int z, int s);

/// The same sum in exact rational arithmetic.
BigRational nb_cdf_exact(int z, int s);

/// Classical asymptotic tail of the s = r = 0 statistic, (c+2) / 2^(c+1).
double sidak_asymptotic_tail(int c);
BigRational sidak_asymptotic_tail_exact(int c);

/// Chi-square degrees of freedom rule.
enum class ChiSquareDf {
  text,     ///< [rho m] + 1
  matched,  ///< 2([rho m] + 1), matching the negative binomial's mean and variance
};

struct ApproxConfig {
  ChiSquareDf df_mode = ChiSquareDf::matched;
};

double chisq_degrees_of_freedom(int m, double rho, const ApproxConfig& config = {});

/// P(chi^2_df > c) with df chosen by `config` from s = [rho m].
double chisq_tail_approx(int c, int m, double rho, const ApproxConfig& config = {});

}  // namespace sidak
