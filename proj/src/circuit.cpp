#include "cgplab/circuit.hpp"

#include <algorithm>
#include <stdexcept>

#include "cgplab/errors.hpp"

namespace cgplab {

const char* gate_name(GateFunction f) {
  switch (f) {
    case GateFunction::Or: return "OR";
    case GateFunction::And: return "AND";
    case GateFunction::Nand: return "NAND";
    case GateFunction::Nor: return "NOR";
  }
  return "?";
}

std::uint64_t BehaviorSignature::word_mask(int n_inputs) {
  return n_inputs >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::size_t{1} << n_inputs)) - 1;
}

std::size_t BehaviorSignature::word_count(int n_inputs) {
  return n_inputs >= 6 ? std::size_t{1} << (n_inputs - 6) : 1;
}

BehaviorSignature::BehaviorSignature(int n_inputs) : n_inputs_(n_inputs), words_(word_count(n_inputs), 0) {
  if (n_inputs < 1 || n_inputs > 24) throw std::invalid_argument("behavior signature: n_inputs must be in [1, 24]");
}

BehaviorSignature::BehaviorSignature(int n_inputs, std::vector<std::uint64_t> words)
    : n_inputs_(n_inputs), words_(std::move(words)) {
  if (n_inputs < 1 || n_inputs > 24) throw std::invalid_argument("behavior signature: n_inputs must be in [1, 24]");
  if (words_.size() != word_count(n_inputs)) throw std::invalid_argument("behavior signature: wrong word count");
  words_.back() &= word_mask(n_inputs);
}

void BehaviorSignature::set_bit(std::size_t pattern, bool value) {
  const std::uint64_t m = std::uint64_t{1} << (pattern & 63);
  if (value) {
    words_[pattern >> 6] |= m;
  } else {
    words_[pattern >> 6] &= ~m;
  }
}

std::string behavior_key(const BehaviorSignature& s) {
  std::string key(s.size(), '0');
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s.bit(j)) key[j] = '1';
  }
  return key;
}

BehaviorSignature behavior_from_key(std::string_view key) {
  int n = 0;
  while (n <= 24 && (std::size_t{1} << n) < key.size()) ++n;
  if (n < 1 || n > 24 || (std::size_t{1} << n) != key.size()) {
    throw std::invalid_argument("behavior key length must be a power of two >= 2");
  }
  BehaviorSignature s(n);
  for (std::size_t j = 0; j < key.size(); ++j) {
    if (key[j] != '0' && key[j] != '1') throw std::invalid_argument("behavior key must contain only '0'/'1'");
    s.set_bit(j, key[j] == '1');
  }
  return s;
}

std::vector<std::uint64_t> input_words(int n_inputs, int input) {
  static constexpr std::uint64_t kLowPatterns[6] = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
  };
  const std::size_t n_words = BehaviorSignature::word_count(n_inputs);
  std::vector<std::uint64_t> words(n_words);
  const int k = input - 1;
  for (std::size_t w = 0; w < n_words; ++w) {
    if (k < 6) {
      words[w] = kLowPatterns[k];
    } else {
      words[w] = ((w >> (k - 6)) & 1U) ? ~std::uint64_t{0} : 0;
    }
  }
  words.back() &= BehaviorSignature::word_mask(n_inputs);
  return words;
}

Circuit decode(const Genotype& g) {
  const CircuitShape& shape = g.shape();
  Circuit c{shape, {}, g[shape.output_locus()]};
  c.gates.reserve(static_cast<std::size_t>(shape.n_gates()));
  for (int gate = 0; gate < shape.n_gates(); ++gate) {
    const std::size_t base = 3 * static_cast<std::size_t>(gate);
    c.gates.push_back({static_cast<GateFunction>(g[base]), g[base + 1], g[base + 2]});
  }
  return c;
}

Circuit decode(const CircuitShape& shape, std::span<const Gene> genes) {
  shape.validate();
  if (genes.size() != shape.genotype_length()) {
    throw DecodeError("expected " + std::to_string(shape.genotype_length()) + " genes, got " +
                      std::to_string(genes.size()));
  }
  for (std::size_t i = 0; i < genes.size(); ++i) {
    const GeneRange r = legal_range(shape, i);
    if (!r.contains(genes[i])) {
      throw DecodeError("gene " + std::to_string(genes[i]) + " at locus " + std::to_string(i) +
                        " outside legal range [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]");
    }
  }
  return decode(Genotype(shape, std::vector<Gene>(genes.begin(), genes.end())));
}

Genotype encode(const Circuit& c) {
  const CircuitShape& shape = c.shape;
  if (c.gates.size() != static_cast<std::size_t>(shape.n_gates())) {
    throw DecodeError("circuit has " + std::to_string(c.gates.size()) + " gates, shape requires " +
                      std::to_string(shape.n_gates()));
  }
  std::vector<Gene> genes;
  genes.reserve(shape.genotype_length());
  for (const Gate& gate : c.gates) {
    genes.push_back(static_cast<Gene>(gate.function));
    genes.push_back(gate.in1);
    genes.push_back(gate.in2);
  }
  genes.push_back(c.output_gate);
  try {
    return Genotype(shape, std::move(genes));
  } catch (const std::exception& e) {
    throw DecodeError(std::string("circuit is not encodable: ") + e.what());
  }
}

BehaviorSignature evaluate_all(const Circuit& c) {
  const CircuitShape& shape = c.shape;
  const std::size_t n_words = BehaviorSignature::word_count(shape.n_inputs);
  const std::size_t n_sources = static_cast<std::size_t>(shape.n_inputs + shape.n_gates());
  std::vector<std::uint64_t> values(n_sources * n_words);
  for (int i = 1; i <= shape.n_inputs; ++i) {
    const auto words = input_words(shape.n_inputs, i);
    std::copy(words.begin(), words.end(), values.begin() + static_cast<std::ptrdiff_t>((i - 1) * n_words));
  }
  // Layer by layer, gate-major within a layer: plain index order.
  for (int g = 0; g < shape.n_gates(); ++g) {
    const Gate& gate = c.gates[static_cast<std::size_t>(g)];
    const std::uint64_t* a = &values[static_cast<std::size_t>(gate.in1 - 1) * n_words];
    const std::uint64_t* b = &values[static_cast<std::size_t>(gate.in2 - 1) * n_words];
    std::uint64_t* out = &values[static_cast<std::size_t>(shape.gate_id(g) - 1) * n_words];
    for (std::size_t w = 0; w < n_words; ++w) out[w] = apply_gate(gate.function, a[w], b[w]);
  }
  const std::uint64_t* out = &values[static_cast<std::size_t>(c.output_gate - 1) * n_words];
  return BehaviorSignature(shape.n_inputs, std::vector<std::uint64_t>(out, out + n_words));
}

std::vector<int> functional_gates(const Circuit& c) {
  const CircuitShape& shape = c.shape;
  std::vector<std::uint8_t> needed(static_cast<std::size_t>(shape.n_gates()), 0);
  needed[static_cast<std::size_t>(shape.gate_index(c.output_gate))] = 1;
  // Sources always sit in earlier layers, so one backward sweep suffices.
  for (int g = shape.n_gates() - 1; g >= 0; --g) {
    if (!needed[static_cast<std::size_t>(g)]) continue;
    const Gate& gate = c.gates[static_cast<std::size_t>(g)];
    for (int src : {gate.in1, gate.in2}) {
      if (src > shape.n_inputs) needed[static_cast<std::size_t>(shape.gate_index(src))] = 1;
    }
  }
  std::vector<int> result;
  for (int g = 0; g < shape.n_gates(); ++g) {
    if (needed[static_cast<std::size_t>(g)]) result.push_back(g);
  }
  return result;
}

int phenotypic_complexity(const Circuit& c) { return static_cast<int>(functional_gates(c).size()); }

Simulator::Simulator(const CircuitShape& shape)
    : shape_(shape),
      words_(BehaviorSignature::word_count(shape.n_inputs)),
      values_(static_cast<std::size_t>(shape.n_inputs + shape.n_gates()) * words_),
      needed_(static_cast<std::size_t>(shape.n_gates()), 0),
      result_(shape.n_inputs) {
  shape_.validate();
  for (int i = 1; i <= shape_.n_inputs; ++i) {
    const auto words = input_words(shape_.n_inputs, i);
    std::copy(words.begin(), words.end(), values_.begin() + static_cast<std::ptrdiff_t>((i - 1) * words_));
  }
}

const BehaviorSignature& Simulator::run(const Genotype& g) {
  if (!(g.shape() == shape_)) throw std::invalid_argument("simulator shape does not match genotype");
  const auto genes = g.genes();
  const int n_in = shape_.n_inputs;
  const int n_gates = shape_.n_gates();
  std::fill(needed_.begin(), needed_.end(), 0);
  const int out_index = genes[shape_.output_locus()] - n_in - 1;
  needed_[static_cast<std::size_t>(out_index)] = 1;
  int count = 0;
  for (int gi = out_index; gi >= 0; --gi) {
    if (!needed_[static_cast<std::size_t>(gi)]) continue;
    ++count;
    const std::size_t base = 3 * static_cast<std::size_t>(gi);
    const int a = genes[base + 1] - n_in - 1;
    const int b = genes[base + 2] - n_in - 1;
    if (a >= 0) needed_[static_cast<std::size_t>(a)] = 1;
    if (b >= 0) needed_[static_cast<std::size_t>(b)] = 1;
  }
  last_complexity_ = count;

  for (int gi = 0; gi <= out_index && gi < n_gates; ++gi) {
    if (!needed_[static_cast<std::size_t>(gi)]) continue;
    const std::size_t base = 3 * static_cast<std::size_t>(gi);
    const auto f = static_cast<GateFunction>(genes[base]);
    const std::uint64_t* a = &values_[static_cast<std::size_t>(genes[base + 1] - 1) * words_];
    const std::uint64_t* b = &values_[static_cast<std::size_t>(genes[base + 2] - 1) * words_];
    std::uint64_t* out = &values_[static_cast<std::size_t>(n_in + gi) * words_];
    for (std::size_t w = 0; w < words_; ++w) out[w] = apply_gate(f, a[w], b[w]);
  }
  const std::uint64_t* out = &values_[static_cast<std::size_t>(n_in + out_index) * words_];
  std::vector<std::uint64_t> words(out, out + words_);
  result_ = BehaviorSignature(n_in, std::move(words));
  return result_;
}

std::vector<int> Simulator::last_functional() const {
  std::vector<int> result;
  for (std::size_t g = 0; g < needed_.size(); ++g) {
    if (needed_[g]) result.push_back(static_cast<int>(g));
  }
  return result;
}

}  // namespace cgplab
