#pragma once

#include <optional>
#include <vector>

namespace sidak {

/// Two independent samples: X of size m and Y of size n.
class SamplePair {
 public:
  /// Throws DomainError if either sample is empty or holds a non-finite value.
  SamplePair(std::vector<double> x, std::vector<double> y);

  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& y() const noexcept { return y_; }
  int m() const noexcept { return static_cast<int>(x_.size()); }
  int n() const noexcept { return static_cast<int>(y_.size()); }

  /// True if some X value equals some Y value.
  bool has_cross_ties() const;

  friend bool operator==(const SamplePair&, const SamplePair&) = default;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// How a Y value equal to the X threshold (or an X value equal to the Y
/// threshold) is treated.
enum class TiePolicy {
  error,         ///< throw TieError
  conservative,  ///< the tied value does not exceed / precede
};

/// Threshold positions: X_(m-s) for the exceedance count and Y_(1+r) for the
/// precedence count.
struct ThresholdSpec {
  int s = 0;
  int r = 0;
  std::optional<double> rho;

  /// Throws DomainError unless 0 <= s < m and 0 <= r < n.
  void validate(int m, int n) const;
};

/// s = floor(rho*m), r = floor(rho*n). rho is read as the decimal it prints
/// as, so 0.15 * 40 floors to 6 rather than 5. Requires 0 <= rho < 1.
ThresholdSpec thresholds(int m, int n, double rho);

enum class SupportRegion {
  lower,  ///< Y_(1+r) < X_(m-s): a <= n-r-1 and b <= m-s-1
  upper,  ///< Y_(1+r) > X_(m-s): a >= n-r and b >= m-s
};

struct ExceedanceCounts {
  int a = 0;  ///< number of Y above X_(m-s)
  int b = 0;  ///< number of X below Y_(1+r)
  int v = 0;  ///< a + b

  /// Region of the (a, b) support this pair falls in for the given sizes,
  /// or nullopt if it falls in neither (never happens for tie-free data).
  std::optional<SupportRegion> region(int m, int n, const ThresholdSpec& spec) const;
};

ExceedanceCounts exceedance_stats(const SamplePair& sample, const ThresholdSpec& spec,
                                  TiePolicy ties = TiePolicy::error);

/// Classical precedence statistic: X observations before the (r+1)-th Y.
int precedence_statistic(const SamplePair& sample, int r, TiePolicy ties = TiePolicy::error);

/// Maximal precedence: largest number of X observations in any of the gaps
/// before Y_(1), between Y_(1) and Y_(2), ..., between Y_(r) and Y_(r+1).
int maximal_precedence(const SamplePair& sample, int r, TiePolicy ties = TiePolicy::error);

/// max(n - A_s, m - B_r). Small values point to Y stochastically larger.
int m_statistic(const SamplePair& sample, const ThresholdSpec& spec,
                TiePolicy ties = TiePolicy::error);

/// Sum of the ranks of the X observations in the pooled sample (midranks for
/// tied values).
double wilcoxon_rank_sum(const SamplePair& sample);

}  // namespace sidak
