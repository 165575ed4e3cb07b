#pragma once

#include <optional>
#include <vector>

#include "sidak/combinatorics.hpp"
#include "sidak/exceedance.hpp"
#include "sidak/extended_real.hpp"
#include "sidak/null_distribution.hpp"

namespace sidak {

/// Lehmann alternative G = 1 - (1 - F)^(1/eta). eta = 1 is the null
/// hypothesis; larger eta pushes Y further above X.
class LehmannParam {
 public:
  /// Throws DomainError unless eta is finite and >= 1.
  explicit LehmannParam(double eta);
  double eta() const noexcept { return eta_; }

 private:
  double eta_;
};

/// The two alternating sums whose product (times a factorial prefactor)
/// gives one joint probability under the Lehmann alternative. For the lower
/// support region these are S_p and S_z; for the upper region S_p' and S_z'.
struct LehmannSums {
  SupportRegion region = SupportRegion::lower;
  AlternatingSumResult first;
  AlternatingSumResult second;
};

/// Both sums for entry (k, i). Throws DomainError outside the support.
LehmannSums lehmann_sums(int m, int n, int s, int r, LehmannParam eta, int k, int i,
                         const PrecisionPolicy& policy = {});

/// P(A_s = k, B_r = i) under the Lehmann alternative (0 outside the support).
double lehmann_probability(int m, int n, int s, int r, LehmannParam eta, int k, int i,
                           const PrecisionPolicy& policy = {});

class LehmannJointTable {
 public:
  struct ClampedEntry {
    int k;
    int i;
    double raw_value;
  };

  LehmannJointTable(int m, int n, int s, int r, LehmannParam eta);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int s() const noexcept { return s_; }
  int r() const noexcept { return r_; }
  double eta() const noexcept { return eta_.eta(); }

  double probability(int k, int i) const { return probabilities_[index(k, i)]; }
  void set_probability(int k, int i, double value) { probabilities_[index(k, i)] = value; }

  double mass() const;
  /// pmf of V = k + i for v = 0 .. m+n.
  std::vector<double> v_pmf() const;
  /// P(V >= v).
  double upper_tail(int v) const;

  /// Entries that came out as tiny negatives (> -1e-12) and were set to 0.
  const std::vector<ClampedEntry>& clamped() const noexcept { return clamped_; }
  void record_clamp(ClampedEntry entry) { clamped_.push_back(entry); }

 private:
  std::size_t index(int k, int i) const;

  int m_, n_, s_, r_;
  LehmannParam eta_;
  std::vector<double> probabilities_;
  std::vector<ClampedEntry> clamped_;
};

/// Exact joint pmf of (A_s, B_r) under the Lehmann alternative. A negative
/// entry below -1e-12 raises PrecisionError naming (k, i).
LehmannJointTable joint_pmf_lehmann(int m, int n, int s, int r, LehmannParam eta,
                                    const PrecisionPolicy& policy = {});

enum class PowerMethod { exact, monte_carlo };

struct PowerResult {
  double beta = 0.0;   ///< pi * beta2 + (1 - pi) * beta1
  double beta1 = 0.0;  ///< P(V >= c | alternative)
  double beta2 = 0.0;  ///< P(V >= c - 1 | alternative)
  double pi = 0.0;
  int c = 0;
  PowerMethod method = PowerMethod::exact;
  std::optional<double> mc_std_error;
};

/// Power of the randomized level-alpha V test against the Lehmann alternative.
PowerResult power_exact(int m, int n, int s, int r, const BigRational& alpha, LehmannParam eta,
                        const PrecisionPolicy& policy = {});

}  // namespace sidak
