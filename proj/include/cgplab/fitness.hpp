#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>

#include "cgplab/circuit.hpp"
#include "cgplab/errors.hpp"
#include "cgplab/genome.hpp"
#include "cgplab/random.hpp"

namespace cgplab {

struct TargetFunction {
  BehaviorSignature desired;
  std::string name;

  int n_inputs() const noexcept { return desired.n_inputs(); }
};

/// 1 for patterns with an even number of ones (zero ones counts as even).
TargetFunction even_parity_target(int n);

/// Builds a target from (pattern, desired bit) rows. There must be exactly
/// 2^n rows covering every pattern once; throws ParseError otherwise.
TargetFunction target_from_table(int n, std::span<const std::pair<std::uint32_t, bool>> rows,
                                 std::string name = "table");

// Truth-table file:
//   TT <n>
//   <pattern as n binary chars> <0|1>     (2^n lines)
// The pattern string is written most-significant input first, so input 1
// is the last character.
TargetFunction read_truth_table(std::istream& in, std::string name = "table");
TargetFunction load_truth_table(const std::string& path);
void write_truth_table(std::ostream& out, const TargetFunction& t);

/// Fitness in [0, 1]; an exact multiple of 1/2^n.
struct Fitness {
  double value = 0.0;

  bool optimal() const noexcept { return value == 1.0; }
  friend auto operator<=>(const Fitness&, const Fitness&) = default;
};

/// F = 1 - (mismatching patterns) / 2^n. Throws std::invalid_argument when
/// the signatures have different lengths.
Fitness fitness_of(const BehaviorSignature& behavior, const TargetFunction& target);

/// Count of fitness evaluations with a hard cap.
class EvaluationBudget {
 public:
  explicit EvaluationBudget(std::int64_t max) : max_(max) {}

  std::int64_t used() const noexcept { return used_; }
  std::int64_t max() const noexcept { return max_; }
  std::int64_t remaining() const noexcept { return max_ - used_; }
  bool exhausted() const noexcept { return used_ >= max_; }

  /// Records one evaluation; throws BudgetExhausted if none is left.
  void consume() {
    if (exhausted()) throw BudgetExhausted();
    ++used_;
  }

 private:
  std::int64_t used_ = 0;
  std::int64_t max_;
};

/// Decodes, simulates and scores genotypes against one target. Owns a
/// Simulator, so an instance belongs to a single thread.
class Evaluator {
 public:
  Evaluator(const CircuitShape& shape, const TargetFunction& target);

  /// Budget-accounted evaluation (one unit per call).
  Fitness evaluate(const Genotype& g, EvaluationBudget& budget);
  /// Evaluation outside any budget, for measurements.
  Fitness score(const Genotype& g);

  /// Functional size of the last genotype scored.
  int last_complexity() const noexcept { return sim_.last_complexity(); }
  std::vector<int> last_functional() const { return sim_.last_functional(); }
  const BehaviorSignature& last_behavior() const noexcept { return *last_; }

  const TargetFunction& target() const noexcept { return target_; }
  Simulator& simulator() noexcept { return sim_; }

 private:
  TargetFunction target_;
  Simulator sim_;
  const BehaviorSignature* last_ = nullptr;
};

/// Composition of decode, evaluate_all and fitness_of, charged to `budget`.
Fitness evaluate(const Genotype& g, const TargetFunction& target, EvaluationBudget& budget);

/// f + u with u ~ Uniform[-stochasticity, +stochasticity). Draws nothing
/// when stochasticity is zero.
double noisy_fitness(Fitness f, double stochasticity, Rng& rng);

}  // namespace cgplab
