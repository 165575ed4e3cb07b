#include <doctest.h>

#include <array>
#include <thread>
#include <vector>

#include "sidak/errors.hpp"
#include "sidak/null_distribution.hpp"
#include "sidak/simulation.hpp"
#include "support/lattice_oracle.hpp"

using namespace sidak;

namespace {

BigRational q(long num, long den) { return make_rational(num, den); }

}  // namespace

TEST_SUITE("null_distribution") {
  TEST_CASE("one X and one Y") {
    const auto table = joint_pmf_null(1, 1, 0, 0);
    CHECK(table.total() == 2);
    CHECK(table.probability(0, 0) == q(1, 2));
    CHECK(table.probability(1, 1) == q(1, 2));
    CHECK(table.probability(1, 0) == 0);
    CHECK(table.probability(0, 1) == 0);
    CHECK(cdf_v_null(1, 1, 0, 0, 0) == q(1, 2));
  }

  TEST_CASE("parameter checks") {
    CHECK_THROWS_AS(joint_pmf_null(5, 5, 5, 0), DomainError);
    CHECK_THROWS_AS(joint_pmf_null(5, 5, 0, -1), DomainError);
    CHECK_THROWS_AS(cdf_v_null(10, 10, 0, 0, 21), DomainError);
    CHECK_THROWS_AS(cdf_v_null(10, 10, 0, 0, -1), DomainError);
  }

  TEST_CASE("normalization for all thresholds, m, n <= 25") {
    for (int m = 1; m <= 25; ++m) {
      for (int n = 1; n <= 25; ++n) {
        for (int s = 0; s < m; s += (m > 12 ? 3 : 1)) {
          for (int r = 0; r < n; r += (n > 12 ? 3 : 1)) {
            const auto table = joint_pmf_null(m, n, s, r);
            REQUIRE(table.mass() == table.total());
          }
        }
      }
    }
    const auto five = joint_pmf_null(5, 5, 1, 1);
    CHECK(five.mass() == five.total());
  }

  TEST_CASE("support is the two threshold regions") {
    for (int m = 1; m <= 9; ++m) {
      for (int n = 1; n <= 9; ++n) {
        for (int s = 0; s < m; ++s) {
          for (int r = 0; r < n; ++r) {
            const auto table = joint_pmf_null(m, n, s, r);
            for (int k = 0; k <= n; ++k) {
              for (int i = 0; i <= m; ++i) {
                const bool lower = i <= m - s - 1 && k <= n - r - 1;
                const bool upper = i >= m - s && k >= n - r;
                if (!lower && !upper) REQUIRE(table.count(k, i) == 0);
                REQUIRE(table.count(k, i) >= 0);
              }
            }
          }
        }
      }
    }
  }

  TEST_CASE("closed form equals label enumeration for m, n <= 7") {
    for (int m = 1; m <= 7; ++m) {
      for (int n = 1; n <= 7; ++n) {
        for (int s = 0; s < m; ++s) {
          for (int r = 0; r < n; ++r) REQUIRE(joint_pmf_null(m, n, s, r) == permutation_oracle(m, n, s, r));
        }
      }
    }
  }

  TEST_CASE("closed form equals the lattice-path count at larger sizes") {
    for (auto [m, n, s, r] : std::vector<std::array<int, 4>>{
             {40, 20, 0, 0}, {40, 40, 10, 10}, {40, 28, 6, 4}, {25, 31, 3, 17}, {12, 9, 11, 0}}) {
      CAPTURE(m);
      CAPTURE(n);
      CHECK(joint_pmf_null(m, n, s, r) == testing::lattice_null_table(m, n, s, r));
    }
  }

  TEST_CASE("exchange symmetry for equal samples and thresholds") {
    for (int m = 1; m <= 15; ++m) {
      for (int s = 0; s < m; ++s) {
        const auto table = joint_pmf_null(m, m, s, s);
        for (int k = 0; k <= m; ++k) {
          for (int i = 0; i <= m; ++i) REQUIRE(table.count(k, i) == table.count(i, k));
        }
      }
    }
  }

  TEST_CASE("reflection maps the upper region onto the lower one") {
    for (int m = 1; m <= 10; ++m) {
      for (int n = 1; n <= 10; ++n) {
        for (int s = 0; s < m; ++s) {
          for (int r = 0; r < n; ++r) {
            const auto table = joint_pmf_null(m, n, s, r);
            const auto mirror = joint_pmf_null(n, m, n - r - 1, m - s - 1);
            for (int i = m - s; i <= m; ++i) {
              for (int k = n - r; k <= n; ++k) REQUIRE(table.count(k, i) == mirror.count(m - i, n - k));
            }
          }
        }
      }
    }
  }

  TEST_CASE("V cdf and tails") {
    CHECK(cdf_v_null(10, 10, 0, 0, 20) == 1);
    // 2046 of the 184756 orderings have A + B >= 8.
    CHECK(cdf_v_null(10, 10, 0, 0, 7) == 1 - q(2046, 184756));
    CHECK(p_value(10, 10, 0, 0, 8) == q(2046, 184756));
    CHECK(p_value(10, 10, 1, 1, 10) == q(1328, 46189));
    CHECK(p_value(10, 10, 2, 2, 10) == q(4963, 46189));
    CHECK(p_value(10, 10, 0, 0, 0) == 1);

    for (auto [m, n, s, r] : std::vector<std::array<int, 4>>{{10, 10, 0, 0}, {7, 12, 3, 5}, {20, 20, 4, 4}}) {
      BigRational previous = 0;
      for (int z = 0; z <= m + n; ++z) {
        const BigRational value = cdf_v_null(m, n, s, r, z);
        REQUIRE(value >= previous);
        REQUIRE(p_value(m, n, s, r, z) == (z == 0 ? BigRational(1) : 1 - cdf_v_null(m, n, s, r, z - 1)));
        previous = value;
      }
      CHECK(previous == 1);
    }
  }

  TEST_CASE("historical closed-form tail") {
    CHECK(sidak_closed_form_tail(10, 10, 0) == 1);
    CHECK(sidak_closed_form_tail(10, 10, 20) == 0);
    CHECK(sidak_closed_form_tail(10, 10, 8) == q(2046, 184756));
    // It reaches zero at the top of the support, where the real tail is positive.
    CHECK(p_value(10, 10, 0, 0, 20) > 0);
  }

  TEST_CASE("critical values") {
    const BigRational alpha = q(1, 20);
    const auto d10 = critical_value(10, 10, 0, 0, alpha);
    CHECK(d10.c == 6);  // reject outright when V >= 6, randomize at 5
    const auto d = critical_value(40, 20, 0, 0, alpha);
    CHECK(d.c == 8);
    CHECK(to_double(d.alpha1) == doctest::Approx(0.0432).epsilon(0.01));
    CHECK(to_double(d.alpha2) == doctest::Approx(0.0679).epsilon(0.01));
    const auto big = critical_value(40, 40, 10, 10, alpha);
    CHECK(big.c == 34);
    CHECK(to_double(big.alpha1) == doctest::Approx(0.043).epsilon(0.02));
    CHECK(to_double(big.alpha2) == doctest::Approx(0.055).epsilon(0.02));
  }

  TEST_CASE("randomized rejection") {
    const auto d = critical_value(40, 20, 0, 0, q(1, 20));
    CHECK(randomized_reject(d.c + 3, d) == 1);
    CHECK(randomized_reject(d.c, d) == 1);
    CHECK(randomized_reject(d.c - 1, d) == d.pi);
    CHECK(randomized_reject(0, d) == 0);
    CHECK(to_double(d.pi) == doctest::Approx(0.276411).epsilon(1e-5));
  }

  TEST_CASE("property: exact size and bracketing") {
    for (const BigRational& alpha : {q(1, 100), q(1, 20), q(1, 10), q(1, 4)}) {
      for (int m = 2; m <= 14; ++m) {
        for (int n = 2; n <= 14; n += 3) {
          for (int s = 0; s < m; s += 2) {
            const int r = s % n;
            const auto d = critical_value(m, n, s, r, alpha);
            if (d.degenerate) {
              REQUIRE(d.c == m + n + 1);
              continue;
            }
            REQUIRE(d.alpha1 <= alpha);
            REQUIRE(alpha < d.alpha2);
            REQUIRE(d.pi >= 0);
            REQUIRE(d.pi < 1);
            REQUIRE(d.alpha1 + d.pi * (d.alpha2 - d.alpha1) == alpha);
          }
        }
      }
    }
  }

  TEST_CASE("property: critical value nonincreasing in alpha") {
    for (int m = 3; m <= 20; m += 2) {
      for (int s = 0; s < m; s += 3) {
        int previous = m * 2 + 2;
        for (int pct = 1; pct <= 30; ++pct) {
          const int c = critical_value(m, m, s, s, q(pct, 100)).c;
          REQUIRE(c <= previous);
          previous = c;
        }
      }
    }
  }

  TEST_CASE("degenerate level") {
    const auto d = critical_value(2, 2, 0, 0, q(1, 100));
    CHECK(d.degenerate);
    CHECK(d.c == 5);
    CHECK(d.alpha1 == 0);
    CHECK(d.alpha1 + d.pi * (d.alpha2 - d.alpha1) == q(1, 100));
  }

  TEST_CASE("distribution cache under concurrent access") {
    std::vector<std::thread> workers;
    std::vector<BigRational> tails(6);
    for (int w = 0; w < 6; ++w) {
      workers.emplace_back([w, &tails] { tails[w] = null_v_distribution(30, 30, 3, 3)->upper_tail(10 + w % 2); });
    }
    for (auto& t : workers) t.join();
    for (int w = 2; w < 6; ++w) CHECK(tails[w] == tails[w % 2]);
    CHECK(null_v_distribution(30, 30, 3, 3).get() == null_v_distribution(30, 30, 3, 3).get());
  }
}
