#include "cgplab/fitness.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cgplab/errors.hpp"

namespace cgplab {

TargetFunction even_parity_target(int n) {
  if (n < 1 || n > 24) throw std::invalid_argument("even parity: n must be in [1, 24]");
  BehaviorSignature s(n);
  for (std::size_t j = 0; j < s.size(); ++j) s.set_bit(j, std::popcount(j) % 2 == 0);
  return {std::move(s), "parity" + std::to_string(n)};
}

TargetFunction target_from_table(int n, std::span<const std::pair<std::uint32_t, bool>> rows, std::string name) {
  if (n < 1 || n > 24) throw ParseError(0, "truth table: n must be in [1, 24]");
  const std::size_t n_patterns = std::size_t{1} << n;
  if (rows.size() != n_patterns) {
    throw ParseError(0, "truth table: expected " + std::to_string(n_patterns) + " rows, got " +
                            std::to_string(rows.size()));
  }
  std::vector<std::uint8_t> seen(n_patterns, 0);
  BehaviorSignature s(n);
  for (const auto& [pattern, bit] : rows) {
    if (pattern >= n_patterns) throw ParseError(0, "truth table: pattern " + std::to_string(pattern) + " out of range");
    if (seen[pattern]) throw ParseError(0, "truth table: duplicate pattern " + std::to_string(pattern));
    seen[pattern] = 1;
    s.set_bit(pattern, bit);
  }
  return {std::move(s), std::move(name)};
}

TargetFunction read_truth_table(std::istream& in, std::string name) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing 'TT <n>' header");
  std::istringstream hs(line);
  std::string magic;
  int n = 0;
  if (!(hs >> magic >> n) || magic != "TT" || n < 1 || n > 24) throw ParseError(1, "expected header 'TT <n>'");
  const std::size_t n_patterns = std::size_t{1} << n;
  std::vector<std::uint8_t> seen(n_patterns, 0);
  BehaviorSignature s(n);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string pattern, out, extra;
    if (!(ls >> pattern >> out) || (ls >> extra)) throw ParseError(line_no, "expected '<pattern> <0|1>'");
    if (pattern.size() != static_cast<std::size_t>(n) || pattern.find_first_not_of("01") != std::string::npos) {
      throw ParseError(line_no, "pattern must be " + std::to_string(n) + " binary characters");
    }
    if (out != "0" && out != "1") throw ParseError(line_no, "output must be 0 or 1");
    std::uint32_t j = 0;
    for (char c : pattern) j = (j << 1) | static_cast<std::uint32_t>(c == '1');
    if (seen[j]) throw ParseError(line_no, "duplicate pattern " + pattern);
    seen[j] = 1;
    s.set_bit(j, out == "1");
    ++rows;
  }
  if (rows != n_patterns) {
    throw ParseError(line_no, "expected " + std::to_string(n_patterns) + " rows, found " + std::to_string(rows));
  }
  return {std::move(s), std::move(name)};
}

TargetFunction load_truth_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open truth table '" + path + "'");
  try {
    return read_truth_table(in, path);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

void write_truth_table(std::ostream& out, const TargetFunction& t) {
  const int n = t.n_inputs();
  out << "TT " << n << '\n';
  for (std::size_t j = 0; j < t.desired.size(); ++j) {
    for (int i = n - 1; i >= 0; --i) out << (((j >> i) & 1U) ? '1' : '0');
    out << ' ' << (t.desired.bit(j) ? 1 : 0) << '\n';
  }
}

Fitness fitness_of(const BehaviorSignature& behavior, const TargetFunction& target) {
  if (behavior.n_inputs() != target.desired.n_inputs()) {
    throw std::invalid_argument("fitness: behavior and target cover different pattern counts");
  }
  const auto a = behavior.words();
  const auto b = target.desired.words();
  std::uint64_t mismatches = 0;
  for (std::size_t w = 0; w < a.size(); ++w) mismatches += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
  return {1.0 - static_cast<double>(mismatches) / static_cast<double>(behavior.size())};
}

Evaluator::Evaluator(const CircuitShape& shape, const TargetFunction& target) : target_(target), sim_(shape) {
  if (target_.n_inputs() != shape.n_inputs) {
    throw std::invalid_argument("target has " + std::to_string(target_.n_inputs()) + " inputs, circuit has " +
                                std::to_string(shape.n_inputs));
  }
}

Fitness Evaluator::evaluate(const Genotype& g, EvaluationBudget& budget) {
  budget.consume();
  return score(g);
}

Fitness Evaluator::score(const Genotype& g) {
  last_ = &sim_.run(g);
  return fitness_of(*last_, target_);
}

Fitness evaluate(const Genotype& g, const TargetFunction& target, EvaluationBudget& budget) {
  budget.consume();
  return fitness_of(evaluate_all(decode(g)), target);
}

double noisy_fitness(Fitness f, double stochasticity, Rng& rng) {
  if (stochasticity == 0.0) return f.value;
  return f.value + rng.uniform_real(-stochasticity, stochasticity);
}

}  // namespace cgplab
