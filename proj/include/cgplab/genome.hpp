#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cgplab/random.hpp"

namespace cgplab {

using Gene = std::int32_t;

/// Structural parameters of a layered feed-forward circuit.
///
/// IDs: circuit inputs are 1..n_inputs; gate g (0-based) has ID
/// n_inputs + 1 + g and sits in layer 1 + g / gates_per_layer.
struct CircuitShape {
  int n_inputs = 5;
  int n_layers = 20;
  int gates_per_layer = 20;

  /// 5 inputs, 20 layers of 20 gates.
  static constexpr CircuitShape benchmark() { return {5, 20, 20}; }

  constexpr int n_gates() const { return n_layers * gates_per_layer; }
  constexpr std::size_t genotype_length() const { return 3 * static_cast<std::size_t>(n_gates()) + 1; }
  constexpr std::size_t output_locus() const { return 3 * static_cast<std::size_t>(n_gates()); }
  constexpr std::size_t n_patterns() const { return std::size_t{1} << n_inputs; }

  constexpr int gate_id(int gate) const { return n_inputs + 1 + gate; }
  constexpr int gate_index(int id) const { return id - n_inputs - 1; }
  constexpr int layer_of(int gate) const { return 1 + gate / gates_per_layer; }

  /// Throws std::invalid_argument unless every count is positive and the
  /// pattern count fits the simulator (n_inputs <= 24).
  void validate() const;

  friend constexpr bool operator==(const CircuitShape&, const CircuitShape&) = default;
};

enum class LocusKind { GateFunction, GateInput, OutputSelector };

struct LocusInfo {
  LocusKind kind;
  int gate = -1;   // 0-based gate index; -1 for the output selector
  int slot = 0;    // 1 or 2 for GateInput
  int layer = 0;   // 1-based layer of `gate`
};

/// Inclusive gene range.
struct GeneRange {
  Gene lo;
  Gene hi;
  constexpr std::int64_t size() const { return std::int64_t{hi} - lo + 1; }
  constexpr bool contains(Gene v) const { return lo <= v && v <= hi; }
  friend constexpr bool operator==(const GeneRange&, const GeneRange&) = default;
};

/// Throws std::out_of_range when locus >= genotype_length.
LocusInfo locus_info(const CircuitShape& shape, std::size_t locus);

/// Legal values of a locus:
///   gate function        -> [1, 4]
///   input of layer-L gate -> [1, n_inputs + (L-1) * gates_per_layer]
///   output selector       -> [n_inputs + 1, n_inputs + n_gates]
/// Throws std::out_of_range when locus >= genotype_length.
GeneRange legal_range(const CircuitShape& shape, std::size_t locus);

/// Fixed-length integer genotype. Always holds legal genes for its shape.
class Genotype {
 public:
  /// Validates length and every gene; throws std::invalid_argument on a
  /// length mismatch and std::out_of_range (naming the locus) on a bad gene.
  Genotype(CircuitShape shape, std::vector<Gene> genes);

  const CircuitShape& shape() const noexcept { return shape_; }
  std::span<const Gene> genes() const noexcept { return genes_; }
  Gene operator[](std::size_t locus) const { return genes_[locus]; }
  std::size_t size() const noexcept { return genes_.size(); }

  friend bool operator==(const Genotype&, const Genotype&) = default;

 private:
  struct Trusted {};
  Genotype(CircuitShape shape, std::vector<Gene> genes, Trusted)
      : shape_(shape), genes_(std::move(genes)) {}

  friend class Mutator;
  friend Genotype random_genotype(const CircuitShape&, Rng&);
  friend Genotype mutate_single(const Genotype&, Rng&);
  friend Genotype mutate_functional(const Genotype&, std::span<const int>, Rng&);

  CircuitShape shape_;
  std::vector<Gene> genes_;
};

/// Every gene drawn independently and uniformly from its legal range.
Genotype random_genotype(const CircuitShape& shape, Rng& rng);

/// Per-locus resampling operator at a fixed rate.
///
/// Each locus is independently resampled with probability `rate`, uniformly
/// over its full legal range (so the old value can come back). Mutated loci
/// are located by geometric skipping over a table of (1 - rate)^k built by
/// repeated multiplication, which keeps the draw sequence platform
/// independent.
class Mutator {
 public:
  /// Throws std::invalid_argument unless 0 <= rate <= 1.
  Mutator(const CircuitShape& shape, double rate);

  double rate() const noexcept { return rate_; }
  Genotype operator()(const Genotype& parent, Rng& rng) const;

 private:
  std::size_t next_gap(Rng& rng) const;

  CircuitShape shape_;
  double rate_;
  std::vector<GeneRange> ranges_;
  std::vector<double> survival_;  // survival_[k] = (1 - rate)^k, k = 0..len
};

/// One-shot form of Mutator.
Genotype mutate(const Genotype& g, double mut_rate, Rng& rng);

/// Resamples exactly one locus chosen uniformly over all loci.
Genotype mutate_single(const Genotype& g, Rng& rng);

/// Resamples exactly one locus chosen uniformly among the three loci of each
/// gate in `functional_gates` (0-based indices) plus the output selector.
/// Throws std::invalid_argument if the set is empty or holds a bad index.
Genotype mutate_functional(const Genotype& g, std::span<const int> functional_gates, Rng& rng);

/// Number of differing loci; throws std::invalid_argument on shape mismatch.
std::size_t hamming(const Genotype& a, const Genotype& b);

// Text format:
//   CGP <n_inputs> <n_layers> <gates_per_layer>\n
//   <gene> <gene> ... <gene>\n
void write_genotype(std::ostream& out, const Genotype& g);
std::string genotype_to_text(const Genotype& g);
/// Throws ParseError carrying the offending line (and locus, for bad genes).
Genotype read_genotype(std::istream& in);
Genotype genotype_from_text(const std::string& text);
Genotype load_genotype(const std::string& path);
void save_genotype(const std::string& path, const Genotype& g);

}  // namespace cgplab
