#include <doctest.h>

#include <array>
#include <cmath>
#include <tuple>
#include <vector>

#include "sidak/errors.hpp"
#include "sidak/lehmann.hpp"
#include "sidak/null_distribution.hpp"
#include "sidak/simulation.hpp"

using namespace sidak;

namespace {

const BigRational kAlpha = make_rational(1, 20);

double max_relative_null_deviation(int m, int n, int s, int r) {
  const auto lehmann = joint_pmf_lehmann(m, n, s, r, LehmannParam(1.0));
  const auto null = joint_pmf_null(m, n, s, r);
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i <= m; ++i) {
      const double exact = to_double(null.probability(k, i));
      const double value = lehmann.probability(k, i);
      if (exact == 0.0) {
        worst = std::max(worst, std::fabs(value) > 0.0 ? 1.0 : 0.0);
      } else {
        worst = std::max(worst, std::fabs(value - exact) / exact);
      }
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE("lehmann") {
  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(LehmannParam(0.5), DomainError);
    CHECK_THROWS_AS(LehmannParam(NAN), DomainError);
    CHECK_NOTHROW(LehmannParam(1.0));
    CHECK_THROWS_AS(lehmann_sums(10, 10, 1, 1, LehmannParam(2.0), 9, 1), DomainError);
  }

  TEST_CASE("S_z agrees with a 200-digit reference") {
    // sum_{z=0}^{7} (-1)^z C(7,z) Gamma(2+(z+1)/2) / Gamma(10+(z+1)/2), evaluated
    // with Gamma functions at 200 digits by an independent tool.
    const BigRational reference =
        parse_decimal("3.68103634581850582209535859645789201135367061691825006761966e-8");
    const BigRational reference_sp =
        parse_decimal("3.46652070790001824484583105272760445174238277686553548622514e-4");
    const auto sums = lehmann_sums(10, 10, 1, 1, LehmannParam(2.0), 1, 1);
    CHECK(sums.region == SupportRegion::lower);
    const ExtendedReal ref(reference, 120);
    const ExtendedReal ref_sp(reference_sp, 120);
    CHECK((abs(sums.second.value - ref) / ref).to_double() <= 1e-40);
    CHECK((abs(sums.first.value - ref_sp) / ref_sp).to_double() <= 1e-40);
    CHECK(sums.second.relative_error <= 1e-9);
  }

  TEST_CASE("eta = 1 reproduces the null table") {
    for (int m = 1; m <= 9; ++m) {
      for (int n = 1; n <= 9; ++n) {
        for (int s = 0; s < m; ++s) {
          for (int r = 0; r < n; ++r) REQUIRE(max_relative_null_deviation(m, n, s, r) <= 1e-9);
        }
      }
    }
    CHECK(max_relative_null_deviation(20, 20, 5, 7) <= 1e-9);
    CHECK(max_relative_null_deviation(20, 13, 19, 0) <= 1e-9);
  }

  TEST_CASE("normalization, support and sign") {
    for (auto [m, n, s, r, eta] : std::vector<std::tuple<int, int, int, int, double>>{
             {10, 10, 0, 0, 2.0}, {10, 10, 4, 4, 7.0}, {6, 9, 2, 5, 3.5}, {30, 30, 3, 3, 2.0}}) {
      const auto table = joint_pmf_lehmann(m, n, s, r, LehmannParam(eta));
      CHECK(std::fabs(table.mass() - 1.0) <= 1e-8);
      for (int k = 0; k <= n; ++k) {
        for (int i = 0; i <= m; ++i) {
          const bool lower = i <= m - s - 1 && k <= n - r - 1;
          const bool upper = i >= m - s && k >= n - r;
          if (!lower && !upper) REQUIRE(table.probability(k, i) == 0.0);
          REQUIRE(table.probability(k, i) >= 0.0);
        }
      }
      for (const auto& clamp : table.clamped()) CHECK(clamp.raw_value > -1e-12);
    }
  }

  TEST_CASE("joint entry against simulation") {
    // Entry (A=2, B=1) for m=n=6, s=r=1, eta=2 from 10^6 simulated pairs.
    const auto table = joint_pmf_lehmann(6, 6, 1, 1, LehmannParam(2.0));
    const double p = table.probability(2, 1);
    Engine engine(kDefaultSeed);
    const long reps = 1000000;
    long hits = 0;
    for (long j = 0; j < reps; ++j) {
      const auto counts = exceedance_stats(sample_lehmann_pair(6, 6, LehmannParam(2.0), engine), {1, 1, std::nullopt});
      hits += counts.a == 2 && counts.b == 1;
    }
    const double estimate = static_cast<double>(hits) / static_cast<double>(reps);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
    CHECK(p > 0.0);
    CHECK(std::fabs(estimate - p) <= 3.0 * se);
  }

  TEST_CASE("power reference points") {
    CHECK(power_exact(10, 10, 0, 0, kAlpha, LehmannParam(2.0)).beta == doctest::Approx(0.3212).epsilon(0.01 / 0.3212));
    CHECK(power_exact(10, 10, 4, 4, kAlpha, LehmannParam(7.0)).beta == doctest::Approx(0.9375).epsilon(0.01 / 0.9375));
    CHECK(power_exact(40, 20, 0, 0, kAlpha, LehmannParam(2.0)).beta == doctest::Approx(0.3472).epsilon(0.01 / 0.3472));
    // Frozen exact values.
    CHECK(power_exact(10, 10, 0, 0, kAlpha, LehmannParam(2.0)).beta == doctest::Approx(0.3188).epsilon(5e-4));
    CHECK(power_exact(10, 10, 2, 2, kAlpha, LehmannParam(4.0)).beta == doctest::Approx(0.7142).epsilon(2e-4));
  }

  TEST_CASE("power decomposition and exact size at eta = 1") {
    for (auto [m, n, s, r] : std::vector<std::array<int, 4>>{{10, 10, 0, 0}, {12, 8, 2, 1}, {20, 20, 4, 4}}) {
      const auto null_power = power_exact(m, n, s, r, kAlpha, LehmannParam(1.0));
      CHECK(null_power.beta == doctest::Approx(0.05).epsilon(1e-9));
      for (double eta : {2.0, 5.0}) {
        const auto p = power_exact(m, n, s, r, kAlpha, LehmannParam(eta));
        CHECK(p.method == PowerMethod::exact);
        CHECK(p.beta1 <= p.beta + 1e-15);
        CHECK(p.beta <= p.beta2 + 1e-15);
        CHECK(p.beta == doctest::Approx(p.pi * p.beta2 + (1.0 - p.pi) * p.beta1));
      }
    }
  }

  TEST_CASE("property: power nondecreasing in eta") {
    for (auto [m, n, s, r] : std::vector<std::array<int, 4>>{{10, 10, 0, 0}, {10, 10, 3, 3}, {15, 12, 2, 5}}) {
      double previous = 0.0;
      for (int eta = 1; eta <= 7; ++eta) {
        const double beta = power_exact(m, n, s, r, kAlpha, LehmannParam(eta)).beta;
        REQUIRE(beta >= previous - 1e-6);
        previous = beta;
      }
    }
  }

  TEST_CASE("exact power agrees with simulation") {
    const long reps = 40000;
    for (auto [m, n, r] : std::vector<std::array<int, 3>>{{10, 10, 1}, {20, 15, 3}}) {
      for (double eta : {2.0, 4.0}) {
        const ThresholdSpec spec{r, r, std::nullopt};
        const auto exact = power_exact(m, n, r, r, kAlpha, LehmannParam(eta));
        const auto mc = mc_power(m, n, spec, kAlpha, LehmannParam(eta), reps);
        CAPTURE(m);
        CAPTURE(eta);
        CHECK(std::fabs(mc.beta - exact.beta) <= 3.0 * *mc.mc_std_error);
      }
    }
  }

  TEST_CASE("larger sizes stay accurate") {
    const auto table = joint_pmf_lehmann(60, 60, 6, 6, LehmannParam(3.0));
    CHECK(std::fabs(table.mass() - 1.0) <= 1e-8);
  }
}
