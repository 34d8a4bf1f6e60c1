#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgplab/genome.hpp"

namespace cgplab {

enum class GateFunction : std::uint8_t { Or = 1, And = 2, Nand = 3, Nor = 4 };

constexpr bool apply_gate(GateFunction f, bool a, bool b) {
  switch (f) {
    case GateFunction::Or: return a || b;
    case GateFunction::And: return a && b;
    case GateFunction::Nand: return !(a && b);
    case GateFunction::Nor: return !(a || b);
  }
  return false;
}

constexpr std::uint64_t apply_gate(GateFunction f, std::uint64_t a, std::uint64_t b) {
  switch (f) {
    case GateFunction::Or: return a | b;
    case GateFunction::And: return a & b;
    case GateFunction::Nand: return ~(a & b);
    case GateFunction::Nor: return ~(a | b);
  }
  return 0;
}

const char* gate_name(GateFunction f);

/// Output bit for each of the 2^n input patterns. Pattern j drives input i
/// (1-based) with bit i-1 of j. Bits are packed 64 per word, pattern j at
/// bit j % 64 of word j / 64; unused high bits (n < 6) are always zero.
class BehaviorSignature {
 public:
  BehaviorSignature() = default;
  /// All-zero signature over 2^n_inputs patterns.
  explicit BehaviorSignature(int n_inputs);
  BehaviorSignature(int n_inputs, std::vector<std::uint64_t> words);

  int n_inputs() const noexcept { return n_inputs_; }
  std::size_t size() const noexcept { return std::size_t{1} << n_inputs_; }
  bool bit(std::size_t pattern) const { return (words_[pattern >> 6] >> (pattern & 63)) & 1U; }
  void set_bit(std::size_t pattern, bool value);
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Mask of valid pattern bits in the (single) word when n < 6.
  static std::uint64_t word_mask(int n_inputs);
  static std::size_t word_count(int n_inputs);

  friend bool operator==(const BehaviorSignature&, const BehaviorSignature&) = default;

 private:
  int n_inputs_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Canonical text key: 2^n characters, pattern j at position j.
std::string behavior_key(const BehaviorSignature& s);
/// Inverse of behavior_key; throws std::invalid_argument on bad length or chars.
BehaviorSignature behavior_from_key(std::string_view key);

struct Gate {
  GateFunction function = GateFunction::Or;
  int in1 = 1;  // source ids: 1..n_inputs are circuit inputs, above that gates
  int in2 = 1;
  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
  CircuitShape shape;
  std::vector<Gate> gates;  // indexed by 0-based gate index
  int output_gate = 0;      // gate ID (n_inputs + 1 + index)

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

Circuit decode(const Genotype& g);
/// Decodes unchecked raw genes; throws DecodeError for a wrong length or any
/// gene outside its legal range.
Circuit decode(const CircuitShape& shape, std::span<const Gene> genes);
/// Lossless inverse of decode. Throws DecodeError if the circuit violates
/// the feed-forward layout of its shape.
Genotype encode(const Circuit& c);

/// Evaluates every gate on all input patterns at once (one machine word per
/// 64 patterns) and returns the output gate's signature.
BehaviorSignature evaluate_all(const Circuit& c);

/// 0-based indices of gates backward-reachable from the output gate, sorted
/// ascending. Always contains the output gate.
std::vector<int> functional_gates(const Circuit& c);

/// Number of functional gates.
int phenotypic_complexity(const Circuit& c);

/// Bit-vector words carrying input `input` (1-based) across all patterns.
std::vector<std::uint64_t> input_words(int n_inputs, int input);

/// Reusable evaluator working directly on genotypes.
///
/// Only functional gates are simulated; the result is identical to
/// evaluate_all(decode(g)) because non-functional gates cannot reach the
/// output. Scratch buffers are kept between calls, so one instance must not
/// be shared between threads.
class Simulator {
 public:
  explicit Simulator(const CircuitShape& shape);

  const CircuitShape& shape() const noexcept { return shape_; }

  /// Signature of `g`. The reference stays valid until the next call.
  const BehaviorSignature& run(const Genotype& g);

  /// Functional gate count of the genotype passed to the last run().
  int last_complexity() const noexcept { return last_complexity_; }
  /// Functional gate indices (ascending) of the last run().
  std::vector<int> last_functional() const;

 private:
  CircuitShape shape_;
  std::size_t words_;
  std::vector<std::uint64_t> values_;  // (n_inputs + n_gates) * words_, by source id - 1
  std::vector<std::uint8_t> needed_;
  BehaviorSignature result_;
  int last_complexity_ = 0;
};

}  // namespace cgplab
