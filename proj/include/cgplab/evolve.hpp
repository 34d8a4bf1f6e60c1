#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cgplab/fitness.hpp"
#include "cgplab/genome.hpp"

namespace cgplab {

/// Single parent, `lambda` mutants per generation, best of parent and
/// mutants (by noisy fitness) becomes the next parent.
struct OnePlusLambda {
  int lambda = 10;
};

/// `mu` parents each produce one mutant; the best `mu` of the 2*mu
/// candidates (by noisy fitness) survive.
struct MuPlusOne {
  int mu = 20;
};

enum class InterbreedingPlacement {
  PerParent,      // checked right after each parent's variation chain
  PerGeneration,  // checked once after the parent loop, with the last chain's best
};

/// Parallel stochastic hill climber: every parent runs its own chain of
/// `variations` mutate/evaluate steps; the best chain state (true fitness)
/// replaces the parent and, with probability `interbreeding`, the worst
/// member of the population.
struct Pshc {
  int pop_size = 20;
  int variations = 100;
  double interbreeding = 0.05;
  InterbreedingPlacement placement = InterbreedingPlacement::PerParent;
};

using AlgorithmVariant = std::variant<OnePlusLambda, MuPlusOne, Pshc>;

struct AlgorithmConfig {
  AlgorithmVariant variant = OnePlusLambda{};
  double mut_rate = 0.03;
  double stochasticity = 0.0;
  std::int64_t max_evaluations = 6'000'000;
  std::uint64_t seed = 1;
  CircuitShape shape = CircuitShape::benchmark();

  /// Throws ConfigError when any parameter is out of its domain.
  void validate() const;
};

/// "one-plus-lambda", "mu-plus-one" or "pshc".
std::string algorithm_name(const AlgorithmVariant& v);

struct ScoredGenotype {
  Genotype genotype;
  Fitness fitness;
};

struct TrajectoryPoint {
  std::int64_t evaluations;
  double best_fitness;
  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct RunRecord {
  AlgorithmConfig config;
  bool success = false;
  std::optional<std::int64_t> evaluations_to_optimal;
  std::int64_t evaluations_used = 0;
  ScoredGenotype first_generation_best;  // best of the initial population
  std::optional<ScoredGenotype> first_optimal;
  ScoredGenotype final_best;             // best true fitness at termination
  std::vector<ScoredGenotype> final_population;
  std::vector<TrajectoryPoint> trajectory;  // one point per best-so-far improvement
};

enum class Termination { Continue, Success, Budget };

/// Success iff the best true fitness is 1; Budget iff the budget is spent.
Termination termination_check(Fitness best_true_fitness, const EvaluationBudget& budget);

/// Called after every completed (or truncated final) generation with the
/// current parents and the evaluations used so far.
using GenerationObserver = std::function<void(std::span<const ScoredGenotype> parents, std::int64_t evaluations)>;

RunRecord run_one_plus_lambda(const AlgorithmConfig& cfg, const TargetFunction& target,
                              const GenerationObserver& observer = {});
RunRecord run_mu_plus_one(const AlgorithmConfig& cfg, const TargetFunction& target,
                          const GenerationObserver& observer = {});
RunRecord run_pshc(const AlgorithmConfig& cfg, const TargetFunction& target,
                   const GenerationObserver& observer = {});

/// Dispatches on cfg.variant.
RunRecord run_algorithm(const AlgorithmConfig& cfg, const TargetFunction& target,
                        const GenerationObserver& observer = {});

}  // namespace cgplab
