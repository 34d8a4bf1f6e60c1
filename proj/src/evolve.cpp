#include "cgplab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cgplab/errors.hpp"

namespace cgplab {

void AlgorithmConfig::validate() const {
  try {
    shape.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(mut_rate >= 0.0 && mut_rate <= 1.0)) throw ConfigError("mut-rate must be in [0, 1]");
  if (!(stochasticity >= 0.0) || !std::isfinite(stochasticity)) throw ConfigError("stochasticity must be >= 0");
  if (max_evaluations < 1) throw ConfigError("max-evals must be >= 1");
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, OnePlusLambda>) {
          if (v.lambda < 1) throw ConfigError("lambda must be >= 1");
        } else if constexpr (std::is_same_v<T, MuPlusOne>) {
          if (v.mu < 1) throw ConfigError("mu must be >= 1");
        } else {
          if (v.pop_size < 1) throw ConfigError("pop must be >= 1");
          if (v.variations < 1) throw ConfigError("variations must be >= 1");
          if (!(v.interbreeding >= 0.0 && v.interbreeding <= 1.0)) throw ConfigError("interbreeding must be in [0, 1]");
        }
      },
      variant);
}

std::string algorithm_name(const AlgorithmVariant& v) {
  switch (v.index()) {
    case 0: return "one-plus-lambda";
    case 1: return "mu-plus-one";
    default: return "pshc";
  }
}

Termination termination_check(Fitness best_true_fitness, const EvaluationBudget& budget) {
  if (best_true_fitness.optimal()) return Termination::Success;
  if (budget.exhausted()) return Termination::Budget;
  return Termination::Continue;
}

namespace {

// Shared bookkeeping for one run: random source, budget, evaluator,
// trajectory and the first-optimum snapshot. Termination is checked after
// every evaluation.
class RunState {
 public:
  RunState(const AlgorithmConfig& cfg, const TargetFunction& target)
      : cfg_(cfg),
        rng_(cfg.seed),
        budget_(cfg.max_evaluations),
        evaluator_(cfg.shape, target),
        mutate_(cfg.shape, cfg.mut_rate) {}

  Rng& rng() { return rng_; }
  const AlgorithmConfig& config() const { return cfg_; }
  std::int64_t used() const { return budget_.used(); }

  bool stopped() const { return termination_check(best_, budget_) != Termination::Continue; }

  Genotype mutant_of(const Genotype& parent) { return mutate_(parent, rng_); }

  double noisy(Fitness f) { return noisy_fitness(f, cfg_.stochasticity, rng_); }

  /// Caller guarantees !stopped().
  ScoredGenotype evaluate(Genotype g) {
    const Fitness f = evaluator_.evaluate(g, budget_);
    if (trajectory_.empty() || f > best_) {
      best_ = f;
      trajectory_.push_back({budget_.used(), f.value});
    }
    if (f.optimal() && !first_optimal_) {
      first_optimal_ = ScoredGenotype{g, f};
      evals_to_optimal_ = budget_.used();
    }
    return {std::move(g), f};
  }

  RunRecord finish(ScoredGenotype first_generation_best, std::vector<ScoredGenotype> population) {
    RunRecord r{cfg_, first_optimal_.has_value(), evals_to_optimal_, budget_.used(), std::move(first_generation_best),
                first_optimal_, population.front(), {}, std::move(trajectory_)};
    for (const auto& s : population) {
      if (s.fitness > r.final_best.fitness) r.final_best = s;
    }
    r.final_population = std::move(population);
    return r;
  }

 private:
  AlgorithmConfig cfg_;
  Rng rng_;
  EvaluationBudget budget_;
  Evaluator evaluator_;
  Mutator mutate_;
  Fitness best_{-1.0};
  std::vector<TrajectoryPoint> trajectory_;
  std::optional<ScoredGenotype> first_optimal_;
  std::optional<std::int64_t> evals_to_optimal_;
};

const ScoredGenotype& best_of(std::span<const ScoredGenotype> pop) {
  const ScoredGenotype* best = &pop.front();
  for (const auto& s : pop) {
    if (s.fitness > best->fitness) best = &s;
  }
  return *best;
}

template <class T>
const T& variant_params(const AlgorithmConfig& cfg, const char* expected) {
  cfg.validate();
  if (!std::holds_alternative<T>(cfg.variant)) {
    throw ConfigError(std::string("algorithm variant is ") + algorithm_name(cfg.variant) + ", expected " + expected);
  }
  return std::get<T>(cfg.variant);
}

}  // namespace

RunRecord run_one_plus_lambda(const AlgorithmConfig& cfg, const TargetFunction& target,
                              const GenerationObserver& observer) {
  const auto params = variant_params<OnePlusLambda>(cfg, "one-plus-lambda");
  RunState st(cfg, target);
  Rng& rng = st.rng();

  ScoredGenotype parent = st.evaluate(random_genotype(cfg.shape, rng));
  ScoredGenotype first_generation_best = parent;

  std::vector<ScoredGenotype> offspring;
  std::vector<std::size_t> ties;
  while (!st.stopped()) {
    const double parent_noisy = st.noisy(parent.fitness);
    offspring.clear();
    ties.clear();
    double best_noisy = 0.0;
    for (int o = 0; o < params.lambda && !st.stopped(); ++o) {
      offspring.push_back(st.evaluate(st.mutant_of(parent.genotype)));
      const double nz = st.noisy(offspring.back().fitness);
      if (ties.empty() || nz > best_noisy) {
        best_noisy = nz;
        ties.assign(1, offspring.size() - 1);
      } else if (nz == best_noisy) {
        ties.push_back(offspring.size() - 1);
      }
    }
    // Offspring win ties against the parent; equal offspring are picked
    // uniformly.
    if (!ties.empty() && best_noisy >= parent_noisy) {
      const std::size_t pick = ties.size() == 1 ? ties.front() : ties[rng.index(ties.size())];
      parent = std::move(offspring[pick]);
    }
    if (observer) observer(std::span<const ScoredGenotype>(&parent, 1), st.used());
  }
  return st.finish(std::move(first_generation_best), {std::move(parent)});
}

RunRecord run_mu_plus_one(const AlgorithmConfig& cfg, const TargetFunction& target,
                          const GenerationObserver& observer) {
  const auto params = variant_params<MuPlusOne>(cfg, "mu-plus-one");
  const auto mu = static_cast<std::size_t>(params.mu);
  RunState st(cfg, target);
  Rng& rng = st.rng();

  std::vector<ScoredGenotype> pop;
  pop.reserve(mu);
  for (std::size_t p = 0; p < mu && !st.stopped(); ++p) pop.push_back(st.evaluate(random_genotype(cfg.shape, rng)));
  ScoredGenotype first_generation_best = best_of(pop);

  struct Candidate {
    double noisy;
    bool offspring;
    std::uint64_t key;  // parent index, or a random tie-break for offspring
    ScoredGenotype* item;
  };
  std::vector<ScoredGenotype> offspring;
  std::vector<Candidate> ranked;
  std::vector<double> parent_noisy(pop.size());
  while (!st.stopped()) {
    offspring.clear();
    offspring.reserve(pop.size());
    std::size_t done = 0;
    for (; done < pop.size() && !st.stopped(); ++done) {
      parent_noisy[done] = st.noisy(pop[done].fitness);
      offspring.push_back(st.evaluate(st.mutant_of(pop[done].genotype)));
    }
    for (std::size_t p = done; p < pop.size(); ++p) parent_noisy[p] = st.noisy(pop[p].fitness);

    ranked.clear();
    for (std::size_t p = 0; p < pop.size(); ++p) ranked.push_back({parent_noisy[p], false, p, &pop[p]});
    for (auto& child : offspring) ranked.push_back({st.noisy(child.fitness), true, rng.next_u64(), &child});
    // Noisy fitness descending; offspring ahead of parents on ties; random
    // order among tied offspring.
    std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) {
      if (a.noisy != b.noisy) return a.noisy > b.noisy;
      if (a.offspring != b.offspring) return a.offspring;
      return a.key < b.key;
    });

    std::vector<ScoredGenotype> next;
    next.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) next.push_back(std::move(*ranked[i].item));
    pop = std::move(next);
    if (observer) observer(pop, st.used());
  }
  return st.finish(std::move(first_generation_best), std::move(pop));
}

RunRecord run_pshc(const AlgorithmConfig& cfg, const TargetFunction& target, const GenerationObserver& observer) {
  const auto params = variant_params<Pshc>(cfg, "pshc");
  RunState st(cfg, target);
  Rng& rng = st.rng();

  std::vector<ScoredGenotype> pop;
  pop.reserve(static_cast<std::size_t>(params.pop_size));
  for (int p = 0; p < params.pop_size && !st.stopped(); ++p) pop.push_back(st.evaluate(random_genotype(cfg.shape, rng)));
  ScoredGenotype first_generation_best = best_of(pop);
  const auto by_fitness_desc = [](const ScoredGenotype& a, const ScoredGenotype& b) { return a.fitness > b.fitness; };
  std::stable_sort(pop.begin(), pop.end(), by_fitness_desc);

  // Worst slot; the highest index wins ties, matching the tail of a
  // descending sort.
  const auto worst_index = [&pop]() {
    std::size_t w = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
      if (pop[i].fitness <= pop[w].fitness) w = i;
    }
    return w;
  };

  std::optional<ScoredGenotype> last_chain_best;
  while (!st.stopped()) {
    for (std::size_t p = 0; p < pop.size() && !st.stopped(); ++p) {
      ScoredGenotype current = pop[p];
      ScoredGenotype best = current;
      for (int v = 0; v < params.variations && !st.stopped(); ++v) {
        ScoredGenotype candidate = st.evaluate(st.mutant_of(current.genotype));
        const double cand_noisy = st.noisy(candidate.fitness);
        const double cur_noisy = st.noisy(current.fitness);
        if (cand_noisy >= cur_noisy) current = std::move(candidate);
        // Best chain state by true fitness; later states win ties.
        if (current.fitness >= best.fitness) best = current;
      }
      if (best.fitness >= pop[p].fitness) pop[p] = best;

      if (params.placement == InterbreedingPlacement::PerParent) {
        const double u = rng.uniform01();
        if (u < params.interbreeding) {
          const std::size_t w = worst_index();
          if (best.fitness > pop[w].fitness) pop[w] = best;
        }
      } else {
        last_chain_best = std::move(best);
      }
    }
    if (params.placement == InterbreedingPlacement::PerGeneration) {
      std::stable_sort(pop.begin(), pop.end(), by_fitness_desc);
      const double u = rng.uniform01();
      if (last_chain_best && u < params.interbreeding && last_chain_best->fitness > pop.back().fitness) {
        pop.back() = *last_chain_best;
      }
    }
    if (observer) observer(pop, st.used());
  }
  return st.finish(std::move(first_generation_best), std::move(pop));
}

RunRecord run_algorithm(const AlgorithmConfig& cfg, const TargetFunction& target, const GenerationObserver& observer) {
  switch (cfg.variant.index()) {
    case 0: return run_one_plus_lambda(cfg, target, observer);
    case 1: return run_mu_plus_one(cfg, target, observer);
    default: return run_pshc(cfg, target, observer);
  }
}

}  // namespace cgplab
