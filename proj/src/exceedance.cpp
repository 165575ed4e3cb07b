#include "sidak/exceedance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "sidak/combinatorics.hpp"
#include "sidak/errors.hpp"

namespace sidak {
namespace {

std::vector<double> sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values;
}

std::string format_value(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

int floor_product(const BigRational& rho, int size) {
  const BigRational product = rho * size;
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), product.get_num_mpz_t(), product.get_den_mpz_t());
  return static_cast<int>(q.get_si());
}

// Number of values in `data` strictly above `threshold`; under the error
// policy an exact match raises.
int count_above(const std::vector<double>& data, double threshold, TiePolicy ties, const char* what) {
  int count = 0;
  for (double value : data) {
    if (value > threshold) {
      ++count;
    } else if (value == threshold && ties == TiePolicy::error) {
      throw TieError(std::string(what) + " tie at threshold value " + format_value(value), value);
    }
  }
  return count;
}

int count_below(const std::vector<double>& data, double threshold, TiePolicy ties, const char* what) {
  int count = 0;
  for (double value : data) {
    if (value < threshold) {
      ++count;
    } else if (value == threshold && ties == TiePolicy::error) {
      throw TieError(std::string(what) + " tie at threshold value " + format_value(value), value);
    }
  }
  return count;
}

}  // namespace

SamplePair::SamplePair(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.empty()) throw DomainError("sample X is empty");
  if (y_.empty()) throw DomainError("sample Y is empty");
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(x_.begin(), x_.end(), finite)) throw DomainError("sample X holds a non-finite value");
  if (!std::all_of(y_.begin(), y_.end(), finite)) throw DomainError("sample Y holds a non-finite value");
}

bool SamplePair::has_cross_ties() const {
  const auto xs = sorted(x_);
  return std::any_of(y_.begin(), y_.end(),
                     [&xs](double v) { return std::binary_search(xs.begin(), xs.end(), v); });
}

void ThresholdSpec::validate(int m, int n) const {
  if (s < 0 || s >= m) {
    throw DomainError("threshold s=" + std::to_string(s) + " outside [0, m) with m=" + std::to_string(m));
  }
  if (r < 0 || r >= n) {
    throw DomainError("threshold r=" + std::to_string(r) + " outside [0, n) with n=" + std::to_string(n));
  }
}

ThresholdSpec thresholds(int m, int n, double rho) {
  if (m < 1 || n < 1) throw DomainError("sample sizes must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0, 1), got " + format_value(rho));
  const BigRational exact = decimal_rational(rho);
  ThresholdSpec spec{floor_product(exact, m), floor_product(exact, n), rho};
  spec.validate(m, n);
  return spec;
}

std::optional<SupportRegion> ExceedanceCounts::region(int m, int n, const ThresholdSpec& spec) const {
  if (a <= n - spec.r - 1 && b <= m - spec.s - 1) return SupportRegion::lower;
  if (a >= n - spec.r && b >= m - spec.s) return SupportRegion::upper;
  return std::nullopt;
}

ExceedanceCounts exceedance_stats(const SamplePair& sample, const ThresholdSpec& spec, TiePolicy ties) {
  spec.validate(sample.m(), sample.n());
  const auto xs = sorted(sample.x());
  const auto ys = sorted(sample.y());
  // X_(m-s) is the (s+1)-th largest X; Y_(1+r) the (r+1)-th smallest Y.
  const double x_threshold = xs[static_cast<std::size_t>(sample.m() - spec.s - 1)];
  const double y_threshold = ys[static_cast<std::size_t>(spec.r)];
  ExceedanceCounts counts;
  counts.a = count_above(sample.y(), x_threshold, ties, "Y/X-threshold");
  counts.b = count_below(sample.x(), y_threshold, ties, "X/Y-threshold");
  counts.v = counts.a + counts.b;
  return counts;
}

int precedence_statistic(const SamplePair& sample, int r, TiePolicy ties) {
  if (r < 0 || r >= sample.n()) throw DomainError("precedence: r outside [0, n)");
  const auto ys = sorted(sample.y());
  return count_below(sample.x(), ys[static_cast<std::size_t>(r)], ties, "X/Y-threshold");
}

int maximal_precedence(const SamplePair& sample, int r, TiePolicy ties) {
  if (r < 0 || r >= sample.n()) throw DomainError("maximal precedence: r outside [0, n)");
  const auto ys = sorted(sample.y());
  const auto first = ys.begin();
  const auto last = ys.begin() + r + 1;
  std::vector<int> gaps(static_cast<std::size_t>(r) + 1, 0);
  for (double x : sample.x()) {
    if (std::binary_search(first, last, x) && ties == TiePolicy::error) {
      throw TieError("X/Y tie at order statistic value " + format_value(x), x);
    }
    // Gap index = number of the first r+1 Y order statistics at or below x;
    // an X equal to Y_(j) is placed after it.
    const auto gap = static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
    if (gap <= static_cast<std::size_t>(r)) ++gaps[gap];
  }
  return *std::max_element(gaps.begin(), gaps.end());
}

int m_statistic(const SamplePair& sample, const ThresholdSpec& spec, TiePolicy ties) {
  const auto counts = exceedance_stats(sample, spec, ties);
  return std::max(sample.n() - counts.a, sample.m() - counts.b);
}

double wilcoxon_rank_sum(const SamplePair& sample) {
  struct Tagged {
    double value;
    bool from_x;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(sample.x().size() + sample.y().size());
  for (double v : sample.x()) pooled.push_back({v, true});
  for (double v : sample.y()) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(), [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

  double total = 0.0;
  std::size_t start = 0;
  while (start < pooled.size()) {
    std::size_t end = start + 1;
    while (end < pooled.size() && pooled[end].value == pooled[start].value) ++end;
    // Ranks start+1 .. end share their average.
    const double midrank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t j = start; j < end; ++j) {
      if (pooled[j].from_x) total += midrank;
    }
    start = end;
  }
  return total;
}

}  // namespace sidak
