#include "sidak/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "sidak/errors.hpp"

namespace sidak {
namespace {

struct RejectTally {
  long full = 0;      // V >= c
  long boundary = 0;  // V == c - 1

  RejectTally& operator+=(const RejectTally& other) {
    full += other.full;
    boundary += other.boundary;
    return *this;
  }
};

// Runs body(j, tally) for j in [0, replicates), split into contiguous blocks
// over the workers. Tallies are integers, so the reduction is exact and the
// result is independent of the worker count.
template <typename Tally>
Tally run_replicates(long replicates, unsigned workers, const std::function<void(long, Tally&)>& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max(1L, replicates))));
  std::vector<Tally> partial(workers);
  const auto run_block = [&](unsigned w) {
    const long begin = replicates * w / workers;
    const long end = replicates * (w + 1) / workers;
    for (long j = begin; j < end; ++j) body(j, partial[w]);
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run_block, w);
  }
  Tally total{};
  for (const auto& t : partial) total += t;
  return total;
}

double draw_normal(const NormalComponent& component, Engine& engine) {
  std::normal_distribution<double> normal(component.location, component.scale);
  return normal(engine);
}

void check_enumeration_size(int m, int n) {
  if (m < 1 || n < 1) throw DomainError("sample sizes must be positive");
  if (m + n > kMaxEnumerationSize) {
    throw SizeBoundError("exhaustive enumeration limited to m+n <= " + std::to_string(kMaxEnumerationSize) +
                         ", got m+n=" + std::to_string(m + n));
  }
}

// A label arrangement is a bit mask over the pooled order positions 0..N-1
// (ascending); bit set = Y observation.
class Arrangement {
 public:
  Arrangement(std::uint32_t mask, int total) : mask_(mask), total_(total) {}

  // Number of X below the (r+1)-th smallest Y.
  int precedence(int r) const {
    int ys = 0;
    for (int p = 0; p < total_; ++p) {
      if (is_y(p) && ys++ == r) return p - r;
    }
    return total_ - ys;
  }

  // Number of Y above the (s+1)-th largest X.
  int exceedance(int s) const {
    int xs = 0;
    for (int p = total_ - 1; p >= 0; --p) {
      if (!is_y(p) && xs++ == s) return total_ - 1 - p - s;
    }
    return 0;
  }

  int maximal_precedence(int r) const {
    int best = 0;
    int run = 0;
    int ys = 0;
    for (int p = 0; p < total_ && ys <= r; ++p) {
      if (is_y(p)) {
        best = std::max(best, run);
        run = 0;
        ++ys;
      } else {
        ++run;
      }
    }
    return best;
  }

  // Sum of 1-based pooled ranks of the X labels.
  long x_rank_sum() const {
    long sum = 0;
    for (int p = 0; p < total_; ++p) {
      if (!is_y(p)) sum += p + 1;
    }
    return sum;
  }

 private:
  bool is_y(int p) const { return ((mask_ >> p) & 1u) != 0; }

  std::uint32_t mask_;
  int total_;
};

// Calls visit(Arrangement) for each of the C(m+n, n) Y placements.
template <typename Visit>
void for_each_arrangement(int m, int n, Visit&& visit) {
  const int total = m + n;
  std::uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1u);
  const std::uint32_t limit = 1u << total;
  while (mask < limit) {
    visit(Arrangement(mask, total));
    // Gosper's hack: next mask with the same popcount.
    const std::uint32_t low = mask & (~mask + 1u);
    const std::uint32_t ripple = mask + low;
    if (ripple == 0) break;
    mask = ripple | (((ripple ^ mask) >> 2) / low);
  }
}

}  // namespace

Engine replicate_engine(std::uint64_t seed, std::uint64_t replicate) {
  std::seed_seq sequence{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)};
  return Engine(sequence);
}

SamplePair sample_lehmann_pair(int m, int n, LehmannParam eta, Engine& engine) {
  if (m < 1 || n < 1) throw DomainError("sample sizes must be positive");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(m));
  std::vector<double> y(static_cast<std::size_t>(n));
  for (double& v : x) v = uniform(engine);
  for (double& v : y) v = 1.0 - std::pow(1.0 - uniform(engine), eta.eta());
  return SamplePair(std::move(x), std::move(y));
}

SamplePair sample_lehmann_pair(int m, int n, LehmannParam eta, const RngSpec& rng, std::uint64_t replicate) {
  Engine engine = replicate_engine(rng.seed, replicate);
  return sample_lehmann_pair(m, n, eta, engine);
}

void ContaminationSpec::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("contamination epsilon must lie in [0, 1)");
  for (const auto* c : {&x_core, &x_contaminant, &y_core, &y_contaminant}) {
    if (!(c->scale > 0.0) || !std::isfinite(c->location)) {
      throw DomainError("contamination components need finite location and positive scale");
    }
  }
}

ContaminationSpec ContaminationSpec::outlier_example() {
  return ContaminationSpec{0.05, {5.0, 1.0}, {8.0, 1.0}, {6.0, 1.0}, {3.0, 1.0}};
}

SamplePair sample_contaminated_pair(int m, int n, const ContaminationSpec& spec, Engine& engine) {
  spec.validate();
  if (m < 1 || n < 1) throw DomainError("sample sizes must be positive");
  std::bernoulli_distribution contaminated(spec.epsilon);
  std::vector<double> x(static_cast<std::size_t>(m));
  std::vector<double> y(static_cast<std::size_t>(n));
  for (double& v : x) v = draw_normal(contaminated(engine) ? spec.x_contaminant : spec.x_core, engine);
  for (double& v : y) v = draw_normal(contaminated(engine) ? spec.y_contaminant : spec.y_core, engine);
  return SamplePair(std::move(x), std::move(y));
}

SamplePair sample_contaminated_pair(int m, int n, const ContaminationSpec& spec, const RngSpec& rng,
                                    std::uint64_t replicate) {
  Engine engine = replicate_engine(rng.seed, replicate);
  return sample_contaminated_pair(m, n, spec, engine);
}

PowerResult mc_power(int m, int n, const ThresholdSpec& spec, const BigRational& alpha, LehmannParam eta,
                     long replicates, const RngSpec& rng) {
  if (replicates < 1) throw DomainError("mc_power needs at least one replicate");
  spec.validate(m, n);
  const TestDecision decision = critical_value(m, n, spec.s, spec.r, alpha);
  const RejectTally tally = run_replicates<RejectTally>(replicates, rng.workers, [&](long j, RejectTally& t) {
    Engine engine = replicate_engine(rng.seed, static_cast<std::uint64_t>(j));
    const SamplePair sample = sample_lehmann_pair(m, n, eta, engine);
    const int v = exceedance_stats(sample, spec, TiePolicy::conservative).v;
    if (v >= decision.c) {
      ++t.full;
    } else if (v == decision.c - 1) {
      ++t.boundary;
    }
  });
  const double count = static_cast<double>(replicates);
  PowerResult result;
  result.c = decision.c;
  result.pi = to_double(decision.pi);
  result.beta1 = static_cast<double>(tally.full) / count;
  result.beta2 = static_cast<double>(tally.full + tally.boundary) / count;
  result.beta = result.pi * result.beta2 + (1.0 - result.pi) * result.beta1;
  result.method = PowerMethod::monte_carlo;
  result.mc_std_error = std::sqrt(result.beta * (1.0 - result.beta) / count);
  return result;
}

PowerResult mc_power(int m, int n, double rho, const BigRational& alpha, LehmannParam eta, long replicates,
                     const RngSpec& rng) {
  return mc_power(m, n, thresholds(m, n, rho), alpha, eta, replicates, rng);
}

std::vector<ContaminationRow> contamination_experiment(int m, int n, const ContaminationSpec& spec,
                                                       std::span<const double> rho_list,
                                                       const BigRational& alpha, long replicates,
                                                       const RngSpec& rng) {
  if (replicates < 1) throw DomainError("contamination experiment needs at least one replicate");
  spec.validate();
  struct Cell {
    ThresholdSpec thresholds;
    TestDecision decision;
  };
  std::vector<Cell> cells;
  for (double rho : rho_list) {
    const ThresholdSpec t = thresholds(m, n, rho);
    cells.push_back({t, critical_value(m, n, t.s, t.r, alpha)});
  }

  struct Tallies {
    std::vector<RejectTally> per_cell;
    Tallies& operator+=(const Tallies& other) {
      if (per_cell.size() < other.per_cell.size()) per_cell.resize(other.per_cell.size());
      for (std::size_t j = 0; j < other.per_cell.size(); ++j) per_cell[j] += other.per_cell[j];
      return *this;
    }
  };
  const Tallies tallies = run_replicates<Tallies>(replicates, rng.workers, [&](long j, Tallies& t) {
    if (t.per_cell.empty()) t.per_cell.resize(cells.size());
    Engine engine = replicate_engine(rng.seed, static_cast<std::uint64_t>(j));
    const SamplePair sample = sample_contaminated_pair(m, n, spec, engine);
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
      const int v = exceedance_stats(sample, cells[cell].thresholds, TiePolicy::conservative).v;
      if (v >= cells[cell].decision.c) {
        ++t.per_cell[cell].full;
      } else if (v == cells[cell].decision.c - 1) {
        ++t.per_cell[cell].boundary;
      }
    }
  });

  std::vector<ContaminationRow> rows;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    const RejectTally t = cell < tallies.per_cell.size() ? tallies.per_cell[cell] : RejectTally{};
    const double pi = to_double(cells[cell].decision.pi);
    const double rate = (static_cast<double>(t.full) + pi * static_cast<double>(t.boundary)) /
                        static_cast<double>(replicates);
    rows.push_back({rho_list[cell], cells[cell].thresholds.s, cells[cell].thresholds.r, cells[cell].decision.c,
                    rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(replicates))});
  }
  return rows;
}

NullJointTable permutation_oracle(int m, int n, int s, int r) {
  check_enumeration_size(m, n);
  NullJointTable table(m, n, s, r);
  for_each_arrangement(m, n, [&](const Arrangement& a) { ++table.count(a.exceedance(s), a.precedence(r)); });
  return table;
}

BigRational permutation_pvalue(const SamplePair& sample, CompanionStatistic statistic, const ThresholdSpec& spec,
                               TiePolicy ties) {
  const int m = sample.m();
  const int n = sample.n();
  check_enumeration_size(m, n);
  spec.validate(m, n);

  // Counts arrangements whose statistic is at least as extreme as observed.
  BigInt extreme = 0;
  switch (statistic) {
    case CompanionStatistic::precedence: {
      const int observed = precedence_statistic(sample, spec.r, ties);
      for_each_arrangement(m, n, [&](const Arrangement& a) {
        if (a.precedence(spec.r) >= observed) ++extreme;
      });
      break;
    }
    case CompanionStatistic::maximal_precedence: {
      const int observed = maximal_precedence(sample, spec.r, ties);
      for_each_arrangement(m, n, [&](const Arrangement& a) {
        if (a.maximal_precedence(spec.r) >= observed) ++extreme;
      });
      break;
    }
    case CompanionStatistic::m_statistic: {
      const int observed = m_statistic(sample, spec, ties);
      for_each_arrangement(m, n, [&](const Arrangement& a) {
        if (std::max(n - a.exceedance(spec.s), m - a.precedence(spec.r)) <= observed) ++extreme;
      });
      break;
    }
    case CompanionStatistic::v_statistic: {
      const int observed = exceedance_stats(sample, spec, ties).v;
      for_each_arrangement(m, n, [&](const Arrangement& a) {
        if (a.exceedance(spec.s) + a.precedence(spec.r) >= observed) ++extreme;
      });
      break;
    }
    case CompanionStatistic::wilcoxon: {
      const double observed = wilcoxon_rank_sum(sample);
      for_each_arrangement(m, n, [&](const Arrangement& a) {
        if (static_cast<double>(a.x_rank_sum()) <= observed + 1e-9) ++extreme;
      });
      break;
    }
  }
  return make_rational(extreme, binomial(m + n, n));
}

}  // namespace sidak
