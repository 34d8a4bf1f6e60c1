#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cgplab/fitness.hpp"
#include "cgplab/genome.hpp"
#include "cgplab/random.hpp"

namespace cgplab {

// Mutational measures of a single circuit. None of them touch an
// evolutionary budget: offspring are scored with Evaluator::score.

/// Fraction of mutate(g, mut_rate) offspring whose fitness is >= the parent's.
double robustness_multi(const Genotype& g, const TargetFunction& target, double mut_rate, int n_samples, Rng& rng);

/// Fraction of single-locus mutants whose fitness is >= the parent's.
double robustness_single(const Genotype& g, const TargetFunction& target, int n_samples, Rng& rng);

/// Fraction of single-locus mutants whose fitness equals the parent's.
double neutrality_single(const Genotype& g, const TargetFunction& target, int n_samples, Rng& rng);

/// Fraction of mutate(g, mut_rate) offspring whose fitness equals the parent's.
double neutrality_multi(const Genotype& g, const TargetFunction& target, double mut_rate, int n_samples, Rng& rng);

/// Fraction of mutate_functional offspring whose fitness equals the parent's.
double functional_neutrality(const Genotype& g, const TargetFunction& target, int n_samples, Rng& rng);

struct SizeChange {
  std::int64_t larger = 0;
  std::int64_t equal = 0;
  std::int64_t smaller = 0;

  std::int64_t total() const noexcept { return larger + equal + smaller; }
  double p_larger() const { return static_cast<double>(larger) / static_cast<double>(total()); }
  double p_smaller() const { return static_cast<double>(smaller) / static_cast<double>(total()); }
  /// Complement of the other two, so the three fractions sum to one.
  double p_equal() const { return 1.0 - p_larger() - p_smaller(); }
};

/// Classifies mutate(g, mut_rate) offspring by functional size relative to g.
SizeChange size_change_distribution(const Genotype& g, double mut_rate, int n_samples, Rng& rng);

struct VariabilityOptions {
  int walks = 10;
  int walk_len = 1000;
  /// One uniqueness set for all walks (default) or a fresh set per walk.
  bool shared_uniqueness = true;
};

/// Unique behaviors met along fitness-preserving random walks from g.
///
/// Each step mutates the walker with mutate(., mut_rate); the counter grows
/// when the mutant's behavior has not been seen (g's own behavior is seen
/// from the start), then the mutant is kept iff its fitness equals g's.
std::int64_t phenotypic_variability(const Genotype& g, const TargetFunction& target, double mut_rate,
                                    const VariabilityOptions& opts, Rng& rng);

/// Mean pairwise hamming distance; throws std::invalid_argument for fewer
/// than two genotypes.
double population_diversity(std::span<const Genotype> pop);

/// Rank correlation with average ranks for ties. Throws
/// std::invalid_argument on length mismatch or fewer than two points, and
/// UndefinedStatistic when either rank vector is constant.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

/// Average (1-based) ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> xs);

struct MeasureSettings {
  double mut_rate = 0.02;
  int n_samples = 10'000;
  VariabilityOptions variability{};
  std::uint64_t seed = 1;
};

struct MeasureReport {
  double fitness = 0.0;
  int phenotypic_complexity = 0;
  double robustness_multi = 0.0;
  double robustness_single = 0.0;
  double neutrality_single = 0.0;
  double functional_neutrality = 0.0;
  std::int64_t phenotypic_variability = 0;
  SizeChange size_change;
  MeasureSettings settings;
};

/// Every measure of one circuit. Each measure draws from its own stream
/// derived from settings.seed, so results do not depend on which other
/// measures ran.
MeasureReport measure_all(const Genotype& g, const TargetFunction& target, const MeasureSettings& settings);

}  // namespace cgplab
