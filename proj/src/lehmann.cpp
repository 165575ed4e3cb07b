#include "sidak/lehmann.hpp"

#include <cmath>
#include <string>

#include "sidak/errors.hpp"

namespace sidak {
namespace {

// Generator for sum_{j=0}^{top} (-1)^j C(top, j) / prod_{t=lo}^{hi} (t + (base + j) * step),
// where step is 1/eta or eta. Each Gamma ratio in the Lehmann sums has
// arguments differing by an integer, so it collapses to such a product.
TermGenerator pochhammer_terms(long top, int lo, int hi, long base, double eta, bool divide_by_eta) {
  return [=](std::size_t j, unsigned digits) {
    const ExtendedReal eta_ext(eta, digits);
    ExtendedReal shift(static_cast<double>(base + static_cast<long>(j)), digits);
    if (divide_by_eta) {
      shift /= eta_ext;
    } else {
      shift *= eta_ext;
    }
    ExtendedReal product(1.0, digits);
    for (int t = lo; t <= hi; ++t) product *= ExtendedReal(static_cast<double>(t), digits) + shift;
    const ExtendedReal coefficient(binomial(top, static_cast<long>(j)), digits);
    return SignedLogTerm{j % 2 == 0 ? 1 : -1, log(coefficient / product)};
  };
}

AlternatingSumResult run(long top, int lo, int hi, long base, double eta, bool divide_by_eta,
                         const PrecisionPolicy& policy) {
  return alternating_sum(static_cast<std::size_t>(top + 1),
                         pochhammer_terms(top, lo, hi, base, eta, divide_by_eta), policy);
}

// S_p: depends on i only.
AlternatingSumResult lower_sp(int m, int n, int r, double eta, int i, const PrecisionPolicy& policy) {
  // Gamma(m-i+y) / Gamma(m+y+1) = 1 / prod_{t=m-i}^{m} (t+y), y = (n-r+p)/eta
  return run(r, m - i, m, n - r, eta, true, policy);
}

// S_z
AlternatingSumResult lower_sz(int m, int n, int s, int r, double eta, int k, int i,
                              const PrecisionPolicy& policy) {
  // Gamma(s+x+1) / Gamma(m-i+x+1) = 1 / prod_{t=s+1}^{m-i} (t+x), x = (z+k)/eta
  return run(n - k - r - 1, s + 1, m - i, k, eta, true, policy);
}

// S_p'
AlternatingSumResult upper_sp(int m, int n, int s, int r, double eta, int k, int i,
                              const PrecisionPolicy& policy) {
  // Gamma(n-r+w) / Gamma(k+w+1) = 1 / prod_{t=n-r}^{k} (t+w), w = (m-i+p)*eta
  return run(i - m + s, n - r, k, m - i, eta, false, policy);
}

// S_z': depends on k only.
AlternatingSumResult upper_sz(int m, int n, int s, double eta, int k, const PrecisionPolicy& policy) {
  // Gamma(k+v) / Gamma(n+v+1) = 1 / prod_{t=k}^{n} (t+v), v = (z+s+1)*eta
  return run(m - s - 1, k, n, s + 1, eta, false, policy);
}

ExtendedReal lower_prefactor(int m, int n, int s, int r, double eta, int k, unsigned digits) {
  const BigRational ratio = make_rational(factorial(m) * factorial(n),
                                          factorial(r) * factorial(s) * factorial(n - k - r - 1) * factorial(k));
  return ExtendedReal(ratio, digits) / ExtendedReal(eta, digits);
}

ExtendedReal upper_prefactor(int m, int n, int s, int r, double eta, int i, unsigned digits) {
  const BigRational ratio =
      make_rational(factorial(m) * factorial(n),
                    factorial(n - r - 1) * factorial(m - s - 1) * factorial(i - m + s) * factorial(m - i));
  return ExtendedReal(ratio, digits) * ExtendedReal(eta, digits);
}

double combine(const ExtendedReal& prefactor, const AlternatingSumResult& a, const AlternatingSumResult& b) {
  return (prefactor * a.value * b.value).to_double();
}

void check_parameters(int m, int n, int s, int r) {
  if (m < 1 || n < 1) throw DomainError("sample sizes must be positive");
  if (s < 0 || s >= m) throw DomainError("s=" + std::to_string(s) + " outside [0, m)");
  if (r < 0 || r >= n) throw DomainError("r=" + std::to_string(r) + " outside [0, n)");
}

std::optional<SupportRegion> region_of(int m, int n, int s, int r, int k, int i) {
  if (0 <= i && i <= m - s - 1 && 0 <= k && k <= n - r - 1) return SupportRegion::lower;
  if (m - s <= i && i <= m && n - r <= k && k <= n) return SupportRegion::upper;
  return std::nullopt;
}

double settle_sign(double value, int k, int i, LehmannJointTable* table) {
  if (value >= 0.0) return value;
  if (value > -1e-12) {
    if (table != nullptr) table->record_clamp({k, i, value});
    return 0.0;
  }
  throw PrecisionError("Lehmann pmf entry (k=" + std::to_string(k) + ", i=" + std::to_string(i) +
                       ") evaluated to " + std::to_string(value));
}

}  // namespace

LehmannParam::LehmannParam(double eta) : eta_(eta) {
  if (!std::isfinite(eta) || eta < 1.0) throw DomainError("Lehmann eta must be finite and >= 1");
}

LehmannSums lehmann_sums(int m, int n, int s, int r, LehmannParam eta, int k, int i,
                         const PrecisionPolicy& policy) {
  check_parameters(m, n, s, r);
  const auto region = region_of(m, n, s, r, k, i);
  if (!region) throw DomainError("(k, i) lies outside the support");
  const double e = eta.eta();
  if (*region == SupportRegion::lower) {
    return {SupportRegion::lower, lower_sp(m, n, r, e, i, policy), lower_sz(m, n, s, r, e, k, i, policy)};
  }
  return {SupportRegion::upper, upper_sp(m, n, s, r, e, k, i, policy), upper_sz(m, n, s, e, k, policy)};
}

double lehmann_probability(int m, int n, int s, int r, LehmannParam eta, int k, int i,
                           const PrecisionPolicy& policy) {
  check_parameters(m, n, s, r);
  if (!region_of(m, n, s, r, k, i)) return 0.0;
  const LehmannSums sums = lehmann_sums(m, n, s, r, eta, k, i, policy);
  const unsigned digits = std::max(sums.first.digits_used, sums.second.digits_used);
  const ExtendedReal prefactor = sums.region == SupportRegion::lower
                                     ? lower_prefactor(m, n, s, r, eta.eta(), k, digits)
                                     : upper_prefactor(m, n, s, r, eta.eta(), i, digits);
  return settle_sign(combine(prefactor, sums.first, sums.second), k, i, nullptr);
}

LehmannJointTable::LehmannJointTable(int m, int n, int s, int r, LehmannParam eta)
    : m_(m), n_(n), s_(s), r_(r), eta_(eta) {
  check_parameters(m, n, s, r);
  probabilities_.assign(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(m + 1), 0.0);
}

std::size_t LehmannJointTable::index(int k, int i) const {
  if (k < 0 || k > n_ || i < 0 || i > m_) {
    throw DomainError("joint table index (" + std::to_string(k) + "," + std::to_string(i) + ") out of range");
  }
  return static_cast<std::size_t>(k) * static_cast<std::size_t>(m_ + 1) + static_cast<std::size_t>(i);
}

double LehmannJointTable::mass() const {
  double sum = 0.0;
  for (double p : probabilities_) sum += p;
  return sum;
}

std::vector<double> LehmannJointTable::v_pmf() const {
  std::vector<double> out(static_cast<std::size_t>(m_ + n_ + 1), 0.0);
  for (int k = 0; k <= n_; ++k) {
    for (int i = 0; i <= m_; ++i) out[static_cast<std::size_t>(k + i)] += probability(k, i);
  }
  return out;
}

double LehmannJointTable::upper_tail(int v) const {
  const auto pmf = v_pmf();
  double tail = 0.0;
  for (int z = m_ + n_; z >= std::max(v, 0); --z) tail += pmf[static_cast<std::size_t>(z)];
  return tail;
}

LehmannJointTable joint_pmf_lehmann(int m, int n, int s, int r, LehmannParam eta, const PrecisionPolicy& policy) {
  LehmannJointTable table(m, n, s, r, eta);
  const double e = eta.eta();

  for (int i = 0; i <= m - s - 1; ++i) {
    const AlternatingSumResult sp = lower_sp(m, n, r, e, i, policy);
    for (int k = 0; k <= n - r - 1; ++k) {
      const AlternatingSumResult sz = lower_sz(m, n, s, r, e, k, i, policy);
      const unsigned digits = std::max(sp.digits_used, sz.digits_used);
      const double value = combine(lower_prefactor(m, n, s, r, e, k, digits), sp, sz);
      table.set_probability(k, i, settle_sign(value, k, i, &table));
    }
  }
  for (int k = n - r; k <= n; ++k) {
    const AlternatingSumResult sz = upper_sz(m, n, s, e, k, policy);
    for (int i = m - s; i <= m; ++i) {
      const AlternatingSumResult sp = upper_sp(m, n, s, r, e, k, i, policy);
      const unsigned digits = std::max(sp.digits_used, sz.digits_used);
      const double value = combine(upper_prefactor(m, n, s, r, e, i, digits), sp, sz);
      table.set_probability(k, i, settle_sign(value, k, i, &table));
    }
  }
  return table;
}

PowerResult power_exact(int m, int n, int s, int r, const BigRational& alpha, LehmannParam eta,
                        const PrecisionPolicy& policy) {
  const TestDecision decision = critical_value(m, n, s, r, alpha);
  const LehmannJointTable table = joint_pmf_lehmann(m, n, s, r, eta, policy);
  PowerResult result;
  result.c = decision.c;
  result.pi = to_double(decision.pi);
  result.beta1 = table.upper_tail(decision.c);
  result.beta2 = table.upper_tail(decision.c - 1);
  result.beta = result.pi * result.beta2 + (1.0 - result.pi) * result.beta1;
  result.method = PowerMethod::exact;
  return result;
}

}  // namespace sidak
