#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "sidak/combinatorics.hpp"

namespace sidak {

/// Joint null distribution of (A_s, B_r), held as exact arrangement counts
/// over the common denominator C(m+n, n). Entry (k, i) is the number of the
/// C(m+n, n) equally likely X/Y label orderings with A_s = k and B_r = i.
class NullJointTable {
 public:
  /// Zero table; throws DomainError unless 0 <= s < m and 0 <= r < n.
  NullJointTable(int m, int n, int s, int r);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int s() const noexcept { return s_; }
  int r() const noexcept { return r_; }

  /// k in [0, n] (A value), i in [0, m] (B value).
  const BigInt& count(int k, int i) const { return counts_[index(k, i)]; }
  BigInt& count(int k, int i) { return counts_[index(k, i)]; }

  const BigInt& total() const noexcept { return total_; }
  BigRational probability(int k, int i) const { return make_rational(count(k, i), total_); }

  /// Sum of all counts; equals total() for a proper distribution.
  BigInt mass() const;

  /// Counts of V = k + i for v = 0 .. m+n.
  std::vector<BigInt> v_counts() const;

  friend bool operator==(const NullJointTable&, const NullJointTable&) = default;

 private:
  std::size_t index(int k, int i) const;

  int m_, n_, s_, r_;
  BigInt total_;
  std::vector<BigInt> counts_;
};

/// Exact joint null pmf of (A_s, B_r) from its closed-form counting formula.
NullJointTable joint_pmf_null(int m, int n, int s, int r);

/// Null distribution of V = A_s + B_r.
class VDistribution {
 public:
  explicit VDistribution(const NullJointTable& table);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int s() const noexcept { return s_; }
  int r() const noexcept { return r_; }
  int max_value() const noexcept { return m_ + n_; }

  BigRational pmf(int v) const;
  /// P(V <= z) for 0 <= z <= m+n.
  BigRational cdf(int z) const;
  /// P(V >= v) for any integer v (1 below the support, 0 above it).
  BigRational upper_tail(int v) const;

 private:
  int m_, n_, s_, r_;
  BigInt total_;
  std::vector<BigInt> counts_;
  std::vector<BigInt> tail_counts_;  // tail_counts_[v] = #{V >= v}, size m+n+2
};

/// Process-wide cache of V distributions keyed by (m, n, s, r).
std::shared_ptr<const VDistribution> null_v_distribution(int m, int n, int s, int r);

/// P(V <= z | H0) for 0 <= z <= m+n.
BigRational cdf_v_null(int m, int n, int s, int r, int z);

/// Upper-tail p-value P(V >= v_observed | H0), 0 <= v_observed <= m+n.
BigRational p_value(int m, int n, int s, int r, int v_observed);

/// The historical closed form for s = r = 0,
///   { C(m+n-z, n) + sum_{j<z} C(m+n-z-1, m-j) } / C(m+n, n),
/// evaluated literally (binomials with negative top are taken as 0). Kept as
/// a diagnostic only; it does not agree with the exact distribution.
BigRational sidak_closed_form_tail(int m, int n, int z);

struct TestDecision {
  int c = 0;             ///< reject outright when V >= c
  BigRational alpha;     ///< nominal level
  BigRational alpha1;    ///< P(V >= c)
  BigRational alpha2;    ///< P(V >= c - 1)
  BigRational pi;        ///< rejection probability at V = c - 1
  /// True when no attainable tail lies at or below alpha: c = m+n+1, so the
  /// test never rejects by threshold and only randomizes at V = m+n.
  bool degenerate = false;
};

/// Minimal c with P(V >= c | H0) <= alpha, plus the randomization weight
/// pi = (alpha - alpha1) / (alpha2 - alpha1) that makes the size exactly alpha.
TestDecision critical_value(const VDistribution& null, const BigRational& alpha);
TestDecision critical_value(int m, int n, int s, int r, const BigRational& alpha);

/// Probability of rejecting H0 after observing v: 1 if v >= c, pi if
/// v == c - 1, 0 otherwise.
BigRational randomized_reject(int v_observed, const TestDecision& decision);

}  // namespace sidak
