#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sidak/combinatorics.hpp"
#include "sidak/exceedance.hpp"
#include "sidak/lehmann.hpp"
#include "sidak/null_distribution.hpp"

namespace sidak {

inline constexpr std::uint64_t kDefaultSeed = 20130917;

/// Seeding for Monte Carlo work. Replicate j always draws from its own
/// engine seeded by (seed, j), so results do not depend on `workers`.
struct RngSpec {
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
};

using Engine = std::mt19937_64;

Engine replicate_engine(std::uint64_t seed, std::uint64_t replicate);

/// X ~ U(0,1) and Y = 1 - (1-U)^eta, so that G = 1 - (1-F)^(1/eta). Rank
/// statistics are distribution-free under this family, so the uniform F
/// loses nothing.
SamplePair sample_lehmann_pair(int m, int n, LehmannParam eta, Engine& engine);
SamplePair sample_lehmann_pair(int m, int n, LehmannParam eta, const RngSpec& rng,
                               std::uint64_t replicate = 0);

struct NormalComponent {
  double location = 0.0;
  double scale = 1.0;
};

/// X ~ (1-eps) x_core + eps x_contaminant, Y ~ (1-eps) y_core + eps y_contaminant.
struct ContaminationSpec {
  double epsilon = 0.0;
  NormalComponent x_core;
  NormalComponent x_contaminant;
  NormalComponent y_core;
  NormalComponent y_contaminant;

  void validate() const;

  /// X ~ 0.95 N(5,1) + 0.05 N(8,1), Y ~ 0.95 N(6,1) + 0.05 N(3,1).
  static ContaminationSpec outlier_example();
};

SamplePair sample_contaminated_pair(int m, int n, const ContaminationSpec& spec, Engine& engine);
SamplePair sample_contaminated_pair(int m, int n, const ContaminationSpec& spec, const RngSpec& rng,
                                    std::uint64_t replicate = 0);

/// Monte Carlo power of the randomized V test: the mean rejection
/// probability over `replicates` Lehmann sample pairs.
PowerResult mc_power(int m, int n, const ThresholdSpec& spec, const BigRational& alpha, LehmannParam eta,
                     long replicates, const RngSpec& rng = {});
PowerResult mc_power(int m, int n, double rho, const BigRational& alpha, LehmannParam eta, long replicates,
                     const RngSpec& rng = {});

struct ContaminationRow {
  double rho = 0.0;
  int s = 0;
  int r = 0;
  int c = 0;
  double rejection_rate = 0.0;
  double std_error = 0.0;
};

/// Rejection frequency of the randomized V test for each rho, using the same
/// simulated sample pairs for every rho.
std::vector<ContaminationRow> contamination_experiment(int m, int n, const ContaminationSpec& spec,
                                                       std::span<const double> rho_list,
                                                       const BigRational& alpha, long replicates,
                                                       const RngSpec& rng = {});

/// Largest m + n accepted by the exhaustive enumerators.
inline constexpr int kMaxEnumerationSize = 22;

/// Joint null distribution of (A_s, B_r) by brute force: walks all
/// C(m+n, n) placements of the Y labels among the pooled order positions.
NullJointTable permutation_oracle(int m, int n, int s, int r);

enum class CompanionStatistic {
  precedence,          ///< P_r, large values significant
  maximal_precedence,  ///< Q_r, large values significant
  m_statistic,         ///< M_r, small values significant
  v_statistic,         ///< V = A_s + B_r, large values significant
  wilcoxon,            ///< X rank sum, small values significant
};

/// Exact permutation p-value of the chosen statistic in the direction that
/// favours Y stochastically larger. Uses spec.r (and spec.s for M and V).
BigRational permutation_pvalue(const SamplePair& sample, CompanionStatistic statistic,
                               const ThresholdSpec& spec, TiePolicy ties = TiePolicy::error);

}  // namespace sidak
