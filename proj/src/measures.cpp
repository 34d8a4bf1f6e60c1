#include "cgplab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "cgplab/circuit.hpp"
#include "cgplab/errors.hpp"

namespace cgplab {

namespace {

void require_samples(int n) {
  if (n < 1) throw std::invalid_argument("measure: n_samples must be >= 1");
}

// Fraction of `n` offspring from `make` satisfying `keep(child, parent)`.
template <class Make, class Keep>
double offspring_fraction(const Genotype& g, const TargetFunction& target, int n, Make make, Keep keep) {
  require_samples(n);
  Evaluator eval(g.shape(), target);
  const Fitness parent = eval.score(g);
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    if (keep(eval.score(make()), parent)) ++hits;
  }
  return static_cast<double>(hits) / n;
}

}  // namespace

double robustness_multi(const Genotype& g, const TargetFunction& target, double mut_rate, int n_samples, Rng& rng) {
  const Mutator mutate(g.shape(), mut_rate);
  return offspring_fraction(
      g, target, n_samples, [&] { return mutate(g, rng); }, [](Fitness c, Fitness p) { return c >= p; });
}

double robustness_single(const Genotype& g, const TargetFunction& target, int n_samples, Rng& rng) {
  return offspring_fraction(
      g, target, n_samples, [&] { return mutate_single(g, rng); }, [](Fitness c, Fitness p) { return c >= p; });
}

double neutrality_single(const Genotype& g, const TargetFunction& target, int n_samples, Rng& rng) {
  return offspring_fraction(
      g, target, n_samples, [&] { return mutate_single(g, rng); }, [](Fitness c, Fitness p) { return c == p; });
}

double neutrality_multi(const Genotype& g, const TargetFunction& target, double mut_rate, int n_samples, Rng& rng) {
  const Mutator mutate(g.shape(), mut_rate);
  return offspring_fraction(
      g, target, n_samples, [&] { return mutate(g, rng); }, [](Fitness c, Fitness p) { return c == p; });
}

double functional_neutrality(const Genotype& g, const TargetFunction& target, int n_samples, Rng& rng) {
  const std::vector<int> functional = functional_gates(decode(g));
  return offspring_fraction(
      g, target, n_samples, [&] { return mutate_functional(g, functional, rng); },
      [](Fitness c, Fitness p) { return c == p; });
}

SizeChange size_change_distribution(const Genotype& g, double mut_rate, int n_samples, Rng& rng) {
  require_samples(n_samples);
  const Mutator mutate(g.shape(), mut_rate);
  Simulator sim(g.shape());
  sim.run(g);
  const int parent_size = sim.last_complexity();
  SizeChange out;
  for (int i = 0; i < n_samples; ++i) {
    sim.run(mutate(g, rng));
    const int size = sim.last_complexity();
    if (size > parent_size) {
      ++out.larger;
    } else if (size < parent_size) {
      ++out.smaller;
    } else {
      ++out.equal;
    }
  }
  return out;
}

std::int64_t phenotypic_variability(const Genotype& g, const TargetFunction& target, double mut_rate,
                                    const VariabilityOptions& opts, Rng& rng) {
  if (opts.walks < 1) throw std::invalid_argument("variability: walks must be >= 1");
  if (opts.walk_len < 0) throw std::invalid_argument("variability: walk_len must be >= 0");
  const Mutator mutate(g.shape(), mut_rate);
  Evaluator eval(g.shape(), target);
  const Fitness origin_fitness = eval.score(g);
  const std::string origin_key = behavior_key(eval.last_behavior());

  std::unordered_set<std::string> seen{origin_key};
  std::int64_t count = 0;
  for (int w = 0; w < opts.walks; ++w) {
    if (!opts.shared_uniqueness && w > 0) seen = {origin_key};
    Genotype walker = g;
    for (int step = 0; step < opts.walk_len; ++step) {
      Genotype mutant = mutate(walker, rng);
      const Fitness f = eval.score(mutant);
      if (seen.insert(behavior_key(eval.last_behavior())).second) ++count;
      if (f == origin_fitness) walker = std::move(mutant);
    }
  }
  return count;
}

double population_diversity(std::span<const Genotype> pop) {
  if (pop.size() < 2) throw std::invalid_argument("population diversity needs at least two genotypes");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (std::size_t j = i + 1; j < pop.size(); ++j) {
      total += static_cast<double>(hamming(pop[i], pop[j]));
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman: sequences differ in length");
  if (xs.size() < 2) throw std::invalid_argument("spearman: need at least two points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;  // mean rank is the same with or without ties
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedStatistic("spearman: zero rank variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MeasureReport measure_all(const Genotype& g, const TargetFunction& target, const MeasureSettings& s) {
  MeasureReport r;
  r.settings = s;
  Evaluator eval(g.shape(), target);
  r.fitness = eval.score(g).value;
  r.phenotypic_complexity = eval.last_complexity();

  Rng multi(derive_seed(s.seed, 1));
  Rng single(derive_seed(s.seed, 2));
  Rng neutral(derive_seed(s.seed, 3));
  Rng functional(derive_seed(s.seed, 4));
  Rng sizes(derive_seed(s.seed, 5));
  Rng walks(derive_seed(s.seed, 6));
  r.robustness_multi = robustness_multi(g, target, s.mut_rate, s.n_samples, multi);
  r.robustness_single = robustness_single(g, target, s.n_samples, single);
  r.neutrality_single = neutrality_single(g, target, s.n_samples, neutral);
  r.functional_neutrality = functional_neutrality(g, target, s.n_samples, functional);
  r.size_change = size_change_distribution(g, s.mut_rate, s.n_samples, sizes);
  r.phenotypic_variability = phenotypic_variability(g, target, s.mut_rate, s.variability, walks);
  return r;
}

}  // namespace cgplab
