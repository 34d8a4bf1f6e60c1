#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cgplab/measures.hpp"
#include "oracles.hpp"

using namespace cgplab;

namespace {

const CircuitShape kPaper = CircuitShape::benchmark();
const TargetFunction kParity = even_parity_target(5);

TargetFunction table(int n, std::uint32_t bits) {
  BehaviorSignature s(n);
  for (std::uint32_t j = 0; j < (1U << n); ++j) s.set_bit(j, (bits >> j) & 1U);
  return {s, "t"};
}

int oracle_matches(const CircuitShape& s, const std::vector<Gene>& genes, const TargetFunction& t) {
  return oracle::matches(s, genes, [&](std::uint32_t j) { return t.desired.bit(j); });
}

struct Exact {
  double robust = 0;
  double neutral = 0;
};

// Exact single-locus probabilities: locus uniform over all loci, value uniform
// over the locus's range (including the current value).
Exact enumerate_single(const CircuitShape& s, const std::vector<Gene>& parent, const TargetFunction& t) {
  const int base = oracle_matches(s, parent, t);
  Exact e;
  const double locus_p = 1.0 / static_cast<double>(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    const auto [lo, hi] = oracle::range(s, i);
    for (int v = lo; v <= hi; ++v) {
      auto child = parent;
      child[i] = v;
      const int m = oracle_matches(s, child, t);
      const double p = locus_p / (hi - lo + 1);
      if (m >= base) e.robust += p;
      if (m == base) e.neutral += p;
    }
  }
  return e;
}

// Exact probabilities that a per-locus mutant at `rate` is at least as fit as,
// or exactly as fit as, the parent, by walking every genotype of the shape
// with its probability.
Exact enumerate_multi(const CircuitShape& s, const std::vector<Gene>& parent, const TargetFunction& t, double rate) {
  const int base = oracle_matches(s, parent, t);
  std::vector<Gene> child(parent.size());
  Exact total;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double p) {
    if (i == parent.size()) {
      const int m = oracle_matches(s, child, t);
      if (m >= base) total.robust += p;
      if (m == base) total.neutral += p;
      return;
    }
    const auto [lo, hi] = oracle::range(s, i);
    const double size = hi - lo + 1;
    for (int v = lo; v <= hi; ++v) {
      child[i] = v;
      const double q = rate / size + (v == parent[i] ? 1.0 - rate : 0.0);
      rec(i + 1, p * q);
    }
  };
  rec(0, 1.0);
  return total;
}

bool within_sigma(double observed, double p, int n, double k) {
  p = std::clamp(p, 0.0, 1.0);  // enumerated sums can overshoot 1 by rounding
  const double sigma = std::sqrt(p * (1 - p) / n);
  return std::abs(observed - p) <= k * sigma + 1e-9;
}

// Average ranks, written without sharing code with the library.
std::vector<double> ranks(const std::vector<double>& xs) {
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double less = 0, equal = 0;
    for (const double x : xs) {
      less += x < xs[i];
      equal += x == xs[i];
    }
    r[i] = less + (equal + 1) / 2;
  }
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("robustness_single and neutrality_single match exhaustive enumeration") {
  const CircuitShape s{2, 2, 2};
  Rng rng(1);
  for (const std::uint32_t bits : {0b1000U, 0b0110U, 0b1001U, 0b0111U}) {
    const TargetFunction t = table(2, bits);
    for (int k = 0; k < 5; ++k) {
      const Genotype g = random_genotype(s, rng);
      const std::vector<Gene> genes(g.genes().begin(), g.genes().end());
      const Exact e = enumerate_single(s, genes, t);
      const int n = 10000;
      const double rs = robustness_single(g, t, n, rng);
      INFO("bits " << bits << " exact " << e.robust << " sampled " << rs);
      CHECK(within_sigma(rs, e.robust, n, 3.5));
      CHECK(within_sigma(neutrality_single(g, t, n, rng), e.neutral, n, 3.5));
    }
  }
}

TEST_CASE("robustness_multi and neutrality_multi match exhaustive enumeration") {
  const CircuitShape s{2, 1, 2};
  Rng rng(2);
  for (const double rate : {0.1, 0.5}) {
    for (const std::uint32_t bits : {0b1000U, 0b0110U, 0b1110U}) {
      const TargetFunction t = table(2, bits);
      const Genotype g = random_genotype(s, rng);
      const std::vector<Gene> genes(g.genes().begin(), g.genes().end());
      const Exact exact = enumerate_multi(s, genes, t, rate);
      const int n = 10000;
      CHECK(within_sigma(robustness_multi(g, t, rate, n, rng), exact.robust, n, 3.5));
      CHECK(within_sigma(neutrality_multi(g, t, rate, n, rng), exact.neutral, n, 3.5));
    }
  }
}

TEST_CASE("basic measure properties") {
  Rng rng(3);
  const Genotype g = random_genotype(kPaper, rng);
  CHECK(robustness_multi(g, kParity, 0.0, 500, rng) == 1.0);
  for (int k = 0; k < 5; ++k) {
    const Genotype x = random_genotype(kPaper, rng);
    for (const double v : {robustness_multi(x, kParity, 0.05, 500, rng), robustness_single(x, kParity, 500, rng),
                           neutrality_single(x, kParity, 500, rng), neutrality_multi(x, kParity, 0.05, 500, rng),
                           functional_neutrality(x, kParity, 500, rng)}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK_THROWS_AS(robustness_single(g, kParity, 0, rng), std::invalid_argument);

  SUBCASE("reproducible under a fixed seed") {
    Rng a(10), b(10);
    CHECK(robustness_multi(g, kParity, 0.02, 1000, a) == robustness_multi(g, kParity, 0.02, 1000, b));
    CHECK(phenotypic_variability(g, kParity, 0.02, {2, 100, true}, a) ==
          phenotypic_variability(g, kParity, 0.02, {2, 100, true}, b));
  }
}

TEST_CASE("single-gate circuit in the benchmark shape is very robust") {
  std::vector<Gene> genes(kPaper.genotype_length(), 1);
  genes.back() = kPaper.gate_id(0);
  const Genotype g(kPaper, genes);
  const Exact e = enumerate_single(kPaper, genes, kParity);
  Rng rng(4);
  const int n = 10000;
  const double r = robustness_single(g, kParity, n, rng);
  CHECK(e.robust > 0.99);
  CHECK(within_sigma(r, e.robust, n, 3.5));
}

TEST_CASE("optimal parents: neutral and robust fractions coincide") {
  const auto build = oracle::parity_circuit(kPaper);
  const Genotype g(kPaper, build.genes);
  Rng a(5), b(5);
  // Same stream, same offspring: nothing can beat an optimum, so >= and ==
  // select the same offspring.
  CHECK(robustness_single(g, kParity, 5000, a) == neutrality_single(g, kParity, 5000, b));
  Rng e(8), f(8);
  CHECK(robustness_multi(g, kParity, 0.02, 5000, e) == neutrality_multi(g, kParity, 0.02, 5000, f));
  Rng c(6), d(6);
  const double fn = functional_neutrality(g, kParity, 5000, c);
  const double ns = neutrality_single(g, kParity, 5000, d);
  CHECK(fn <= ns);
}

TEST_CASE("size change distribution") {
  Rng rng(7);
  const Genotype g = random_genotype(kPaper, rng);
  const SizeChange sc = size_change_distribution(g, 0.05, 3000, rng);
  CHECK(sc.total() == 3000);
  CHECK(sc.p_larger() + sc.p_equal() + sc.p_smaller() == 1.0);
  CHECK(size_change_distribution(g, 0.0, 100, rng).equal == 100);

  std::vector<Gene> genes(kPaper.genotype_length(), 1);
  genes.back() = kPaper.gate_id(0);
  const SizeChange one = size_change_distribution(Genotype(kPaper, genes), 0.2, 2000, rng);
  CHECK(one.smaller == 0);
  CHECK(one.p_smaller() == 0.0);
}

TEST_CASE("phenotypic variability") {
  Rng rng(8);
  const Genotype g = random_genotype(kPaper, rng);
  CHECK(phenotypic_variability(g, kParity, 0.02, {10, 0, true}, rng) == 0);
  const auto v = phenotypic_variability(g, kParity, 0.05, {3, 200, true}, rng);
  CHECK(v >= 0);
  CHECK(v <= 600);

  SUBCASE("per-walk uniqueness walks the same path and counts at least as many") {
    Rng a(9), b(9);
    const auto shared = phenotypic_variability(g, kParity, 0.05, {4, 200, true}, a);
    const auto per_walk = phenotypic_variability(g, kParity, 0.05, {4, 200, false}, b);
    CHECK(per_walk >= shared);
    CHECK(a.next_u64() == b.next_u64());
  }

  SUBCASE("matches a direct reimplementation of the walk") {
    const TargetFunction t = table(2, 0b0110);
    const CircuitShape s{2, 3, 3};
    Rng r(12);
    const Genotype x = random_genotype(s, r);
    Rng a(13), b(13);
    const auto counted = phenotypic_variability(x, t, 0.2, {3, 50, true}, a);
    // Reference: shared set seeded with the origin, revert unless fitness is equal.
    const auto key_of = [&](const Genotype& y) {
      std::string k;
      const std::vector<Gene> gs(y.genes().begin(), y.genes().end());
      for (std::uint32_t j = 0; j < 4; ++j) k += oracle::output(s, gs, j) ? '1' : '0';
      return k;
    };
    const auto fit_of = [&](const Genotype& y) {
      return oracle_matches(s, std::vector<Gene>(y.genes().begin(), y.genes().end()), t);
    };
    std::set<std::string> seen{key_of(x)};
    std::int64_t expected = 0;
    for (int w = 0; w < 3; ++w) {
      Genotype cur = x;
      for (int step = 0; step < 50; ++step) {
        Genotype m = mutate(cur, 0.2, b);
        expected += seen.insert(key_of(m)).second;
        if (fit_of(m) == fit_of(x)) cur = m;
      }
    }
    CHECK(counted == expected);
  }

  CHECK_THROWS_AS(phenotypic_variability(g, kParity, 0.02, {0, 10, true}, rng), std::invalid_argument);
}

TEST_CASE("population diversity") {
  Rng rng(10);
  const Genotype a = random_genotype(kPaper, rng);
  const Genotype b = random_genotype(kPaper, rng);
  const Genotype c = random_genotype(kPaper, rng);
  CHECK(population_diversity(std::vector<Genotype>{a, a, a}) == 0.0);
  CHECK(population_diversity(std::vector<Genotype>{a, b}) == static_cast<double>(hamming(a, b)));
  const double abc = population_diversity(std::vector<Genotype>{a, b, c});
  CHECK(abc == doctest::Approx((hamming(a, b) + hamming(a, c) + hamming(b, c)) / 3.0));
  CHECK(population_diversity(std::vector<Genotype>{c, a, b}) == abc);
  CHECK_THROWS_AS(population_diversity(std::vector<Genotype>{a}), std::invalid_argument);
}

TEST_CASE("spearman rho") {
  const std::vector<double> up{1, 2, 3, 4, 5};
  const std::vector<double> sq{1, 4, 9, 16, 25};
  const std::vector<double> down{9, 7, 5, 3, 1};
  CHECK(spearman_rho(up, sq) == doctest::Approx(1.0));
  CHECK(spearman_rho(up, down) == doctest::Approx(-1.0));
  CHECK(average_ranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});

  SUBCASE("tie-heavy data against rank-then-correlate") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = 2 + rng.index(40);
      std::vector<double> xs(n), ys(n);
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = static_cast<double>(rng.index(4));
        ys[i] = static_cast<double>(rng.index(3)) + 0.5 * xs[i];
      }
      const auto rx = ranks(xs), ry = ranks(ys);
      const bool flat = std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs[0]; }) ||
                        std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys[0]; });
      if (flat) {
        CHECK_THROWS_AS(spearman_rho(xs, ys), UndefinedStatistic);
      } else {
        CHECK(spearman_rho(xs, ys) == doctest::Approx(pearson(rx, ry)).epsilon(1e-12));
      }
    }
  }

  SUBCASE("no ties: classic d-squared formula") {
    Rng rng(12);
    std::vector<double> xs(30), ys(30);
    std::iota(xs.begin(), xs.end(), 0.0);
    std::iota(ys.begin(), ys.end(), 0.0);
    for (std::size_t i = ys.size(); i > 1; --i) std::swap(ys[i - 1], ys[rng.index(i)]);
    double d2 = 0;
    for (std::size_t i = 0; i < 30; ++i) d2 += (xs[i] - ys[i]) * (xs[i] - ys[i]);
    CHECK(spearman_rho(xs, ys) == doctest::Approx(1 - 6 * d2 / (30.0 * (900 - 1))));
  }

  CHECK_THROWS_AS(spearman_rho(std::vector<double>{1, 1}, std::vector<double>{2, 3}), UndefinedStatistic);
  CHECK_THROWS_AS(spearman_rho(std::vector<double>{1}, std::vector<double>{2}), std::invalid_argument);
  CHECK_THROWS_AS(spearman_rho(std::vector<double>{1, 2}, std::vector<double>{2}), std::invalid_argument);
}

TEST_CASE("measure_all") {
  const auto build = oracle::parity_circuit(kPaper);
  const Genotype g(kPaper, build.genes);
  MeasureSettings s;
  s.n_samples = 2000;
  s.variability = {2, 200, true};
  const MeasureReport r = measure_all(g, kParity, s);
  CHECK(r.fitness == 1.0);
  CHECK(r.phenotypic_complexity == 13);
  CHECK(r.size_change.total() == 2000);
  const MeasureReport again = measure_all(g, kParity, s);
  CHECK(again.robustness_multi == r.robustness_multi);
  CHECK(again.phenotypic_variability == r.phenotypic_variability);

  std::vector<Gene> zero(kPaper.genotype_length(), 1);
  // AND(x1, NOR(x1, x1)) is constant 0.
  zero[0] = 2;
  zero[3] = 4;
  zero[3 * 20] = 2;
  zero[3 * 20 + 1] = kPaper.gate_id(0);
  zero[3 * 20 + 2] = kPaper.gate_id(1);
  zero.back() = kPaper.gate_id(20);
  CHECK(measure_all(Genotype(kPaper, zero), kParity, s).fitness == 0.5);
}
