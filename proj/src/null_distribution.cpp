#include "sidak/null_distribution.hpp"

#include <string>

#include "sidak/errors.hpp"

namespace sidak {
namespace {

void check_parameters(int m, int n, int s, int r) {
  if (m < 1 || n < 1) throw DomainError("sample sizes must be positive");
  if (s < 0 || s >= m) throw DomainError("s=" + std::to_string(s) + " outside [0, m)");
  if (r < 0 || r >= n) throw DomainError("r=" + std::to_string(r) + " outside [0, n)");
}

}  // namespace

NullJointTable::NullJointTable(int m, int n, int s, int r)
    : m_(m), n_(n), s_(s), r_(r) {
  check_parameters(m, n, s, r);
  total_ = binomial(m + n, n);
  counts_.assign(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(m + 1), BigInt(0));
}

std::size_t NullJointTable::index(int k, int i) const {
  if (k < 0 || k > n_ || i < 0 || i > m_) {
    throw DomainError("joint table index (" + std::to_string(k) + "," + std::to_string(i) + ") out of range");
  }
  return static_cast<std::size_t>(k) * static_cast<std::size_t>(m_ + 1) + static_cast<std::size_t>(i);
}

BigInt NullJointTable::mass() const {
  BigInt sum = 0;
  for (const auto& c : counts_) sum += c;
  return sum;
}

std::vector<BigInt> NullJointTable::v_counts() const {
  std::vector<BigInt> out(static_cast<std::size_t>(m_ + n_ + 1), BigInt(0));
  for (int k = 0; k <= n_; ++k) {
    for (int i = 0; i <= m_; ++i) out[static_cast<std::size_t>(k + i)] += count(k, i);
  }
  return out;
}

NullJointTable joint_pmf_null(int m, int n, int s, int r) {
  NullJointTable table(m, n, s, r);
  // Lower region: Y_(1+r) < X_(m-s).
  for (int i = 0; i <= m - s - 1; ++i) {
    const BigInt b_factor = binomial(r + i, r);
    for (int k = 0; k <= n - r - 1; ++k) {
      table.count(k, i) = binomial(s + k, s) * b_factor *
                          binomial(m + n - s - r - i - k - 2, n - r - k - 1);
    }
  }
  // Upper region: Y_(1+r) > X_(m-s).
  for (int i = m - s; i <= m; ++i) {
    const BigInt b_factor = binomial(m + n - r - i - 1, n - r - 1);
    for (int k = n - r; k <= n; ++k) {
      table.count(k, i) = b_factor * binomial(m + n - s - k - 1, m - s - 1) *
                          binomial(k + i - m - n + s + r, k - n + r);
    }
  }
  return table;
}

VDistribution::VDistribution(const NullJointTable& table)
    : m_(table.m()), n_(table.n()), s_(table.s()), r_(table.r()), total_(table.total()),
      counts_(table.v_counts()) {
  tail_counts_.assign(counts_.size() + 1, BigInt(0));
  for (std::size_t v = counts_.size(); v-- > 0;) tail_counts_[v] = tail_counts_[v + 1] + counts_[v];
}

BigRational VDistribution::pmf(int v) const {
  if (v < 0 || v > max_value()) return 0;
  return make_rational(counts_[static_cast<std::size_t>(v)], total_);
}

BigRational VDistribution::cdf(int z) const {
  if (z < 0 || z > max_value()) {
    throw DomainError("cdf argument z=" + std::to_string(z) + " outside [0, m+n]");
  }
  return 1 - upper_tail(z + 1);
}

BigRational VDistribution::upper_tail(int v) const {
  if (v <= 0) return 1;
  if (v > max_value()) return 0;
  return make_rational(tail_counts_[static_cast<std::size_t>(v)], total_);
}

std::shared_ptr<const VDistribution> null_v_distribution(int m, int n, int s, int r) {
  using Key = std::tuple<int, int, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const VDistribution>> cache;
  const Key key{m, n, s, r};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const VDistribution>(joint_pmf_null(m, n, s, r));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(built)).first->second;
}

BigRational cdf_v_null(int m, int n, int s, int r, int z) {
  return null_v_distribution(m, n, s, r)->cdf(z);
}

BigRational p_value(int m, int n, int s, int r, int v_observed) {
  if (v_observed < 0 || v_observed > m + n) {
    throw DomainError("observed V=" + std::to_string(v_observed) + " outside [0, m+n]");
  }
  return null_v_distribution(m, n, s, r)->upper_tail(v_observed);
}

BigRational sidak_closed_form_tail(int m, int n, int z) {
  if (m < 1 || n < 1) throw DomainError("sample sizes must be positive");
  if (z < 0 || z > m + n) throw DomainError("z=" + std::to_string(z) + " outside [0, m+n]");
  const auto choose = [](long top, long bottom) { return top < 0 ? BigInt(0) : binomial(top, bottom); };
  BigInt numerator = choose(m + n - z, n);
  for (int j = 0; j <= z - 1; ++j) numerator += choose(m + n - z - 1, m - j);
  return make_rational(numerator, binomial(m + n, n));
}

TestDecision critical_value(const VDistribution& null, const BigRational& alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0, 1)");
  TestDecision decision;
  decision.alpha = alpha;
  // Tails shrink as c grows and vanish at m+n+1, so a minimal c always exists.
  int c = 1;
  while (null.upper_tail(c) > alpha) ++c;
  decision.c = c;
  decision.degenerate = c == null.max_value() + 1;
  decision.alpha1 = null.upper_tail(c);
  decision.alpha2 = null.upper_tail(c - 1);
  decision.pi = (alpha - decision.alpha1) / (decision.alpha2 - decision.alpha1);
  return decision;
}

TestDecision critical_value(int m, int n, int s, int r, const BigRational& alpha) {
  return critical_value(*null_v_distribution(m, n, s, r), alpha);
}

BigRational randomized_reject(int v_observed, const TestDecision& decision) {
  if (v_observed >= decision.c) return 1;
  if (v_observed == decision.c - 1) return decision.pi;
  return 0;
}

}  // namespace sidak
