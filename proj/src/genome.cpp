#include "cgplab/genome.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cgplab/errors.hpp"

namespace cgplab {

void CircuitShape::validate() const {
  if (n_inputs < 1 || n_layers < 1 || gates_per_layer < 1) {
    throw std::invalid_argument("circuit shape: inputs, layers and gates per layer must all be >= 1");
  }
  if (n_inputs > 24) {
    throw std::invalid_argument("circuit shape: at most 24 inputs are supported");
  }
  if (static_cast<long long>(n_layers) * gates_per_layer > 10'000'000) {
    throw std::invalid_argument("circuit shape: too many gates");
  }
}

LocusInfo locus_info(const CircuitShape& shape, std::size_t locus) {
  if (locus >= shape.genotype_length()) {
    throw std::out_of_range("locus " + std::to_string(locus) + " outside genotype of length " +
                            std::to_string(shape.genotype_length()));
  }
  if (locus == shape.output_locus()) return {LocusKind::OutputSelector};
  const int gate = static_cast<int>(locus / 3);
  const int offset = static_cast<int>(locus % 3);
  const int layer = shape.layer_of(gate);
  if (offset == 0) return {LocusKind::GateFunction, gate, 0, layer};
  return {LocusKind::GateInput, gate, offset, layer};
}

GeneRange legal_range(const CircuitShape& shape, std::size_t locus) {
  const LocusInfo info = locus_info(shape, locus);
  switch (info.kind) {
    case LocusKind::GateFunction:
      return {1, 4};
    case LocusKind::GateInput:
      return {1, shape.n_inputs + (info.layer - 1) * shape.gates_per_layer};
    case LocusKind::OutputSelector:
      break;
  }
  return {shape.n_inputs + 1, shape.n_inputs + shape.n_gates()};
}

namespace {

std::vector<GeneRange> all_ranges(const CircuitShape& shape) {
  std::vector<GeneRange> ranges;
  ranges.reserve(shape.genotype_length());
  for (std::size_t i = 0; i < shape.genotype_length(); ++i) ranges.push_back(legal_range(shape, i));
  return ranges;
}

Gene draw(const GeneRange& r, Rng& rng) { return static_cast<Gene>(rng.uniform_int(r.lo, r.hi)); }

}  // namespace

Genotype::Genotype(CircuitShape shape, std::vector<Gene> genes) : shape_(shape), genes_(std::move(genes)) {
  shape_.validate();
  if (genes_.size() != shape_.genotype_length()) {
    throw std::invalid_argument("genotype has " + std::to_string(genes_.size()) + " genes, shape requires " +
                                std::to_string(shape_.genotype_length()));
  }
  for (std::size_t i = 0; i < genes_.size(); ++i) {
    const GeneRange r = legal_range(shape_, i);
    if (!r.contains(genes_[i])) {
      throw std::out_of_range("gene " + std::to_string(genes_[i]) + " at locus " + std::to_string(i) +
                              " outside legal range [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                              "]");
    }
  }
}

Genotype random_genotype(const CircuitShape& shape, Rng& rng) {
  shape.validate();
  std::vector<Gene> genes;
  genes.reserve(shape.genotype_length());
  for (std::size_t i = 0; i < shape.genotype_length(); ++i) genes.push_back(draw(legal_range(shape, i), rng));
  return Genotype(shape, std::move(genes), Genotype::Trusted{});
}

Mutator::Mutator(const CircuitShape& shape, double rate) : shape_(shape), rate_(rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("mutation rate must be in [0, 1]");
  shape_.validate();
  ranges_ = all_ranges(shape_);
  const std::size_t len = shape_.genotype_length();
  survival_.resize(len + 1);
  survival_[0] = 1.0;
  for (std::size_t k = 1; k <= len; ++k) survival_[k] = survival_[k - 1] * (1.0 - rate_);
}

// Number of untouched loci before the next mutated one. P(gap >= k) =
// survival_[k]; a return value of len means "no further mutation".
std::size_t Mutator::next_gap(Rng& rng) const {
  const double u = rng.uniform01();
  // survival_ is non-increasing; find the first k with survival_[k] <= u.
  const auto it = std::partition_point(survival_.begin() + 1, survival_.end(), [u](double s) { return s > u; });
  return static_cast<std::size_t>(it - survival_.begin()) - 1;
}

Genotype Mutator::operator()(const Genotype& parent, Rng& rng) const {
  if (!(parent.shape() == shape_)) throw std::invalid_argument("mutator shape does not match genotype");
  std::vector<Gene> genes(parent.genes().begin(), parent.genes().end());
  if (rate_ > 0.0) {
    const std::size_t len = genes.size();
    std::size_t pos = next_gap(rng);
    while (pos < len) {
      genes[pos] = draw(ranges_[pos], rng);
      const std::size_t gap = next_gap(rng);
      if (gap >= len - pos) break;
      pos += gap + 1;
    }
  }
  return Genotype(shape_, std::move(genes), Genotype::Trusted{});
}

Genotype mutate(const Genotype& g, double mut_rate, Rng& rng) { return Mutator(g.shape(), mut_rate)(g, rng); }

Genotype mutate_single(const Genotype& g, Rng& rng) {
  std::vector<Gene> genes(g.genes().begin(), g.genes().end());
  const std::size_t locus = rng.index(genes.size());
  genes[locus] = draw(legal_range(g.shape(), locus), rng);
  return Genotype(g.shape(), std::move(genes), Genotype::Trusted{});
}

Genotype mutate_functional(const Genotype& g, std::span<const int> functional_gates, Rng& rng) {
  if (functional_gates.empty()) throw std::invalid_argument("mutate_functional: empty functional gate set");
  const int n_gates = g.shape().n_gates();
  for (int gate : functional_gates) {
    if (gate < 0 || gate >= n_gates) {
      throw std::invalid_argument("mutate_functional: gate index " + std::to_string(gate) + " out of range");
    }
  }
  // Eligible loci: 3 per functional gate, then the output selector.
  const std::size_t n_eligible = 3 * functional_gates.size() + 1;
  const std::size_t pick = rng.index(n_eligible);
  const std::size_t locus = pick + 1 == n_eligible
                                ? g.shape().output_locus()
                                : 3 * static_cast<std::size_t>(functional_gates[pick / 3]) + pick % 3;
  std::vector<Gene> genes(g.genes().begin(), g.genes().end());
  genes[locus] = draw(legal_range(g.shape(), locus), rng);
  return Genotype(g.shape(), std::move(genes), Genotype::Trusted{});
}

std::size_t hamming(const Genotype& a, const Genotype& b) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("hamming: genotypes have different shapes");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

void write_genotype(std::ostream& out, const Genotype& g) {
  const CircuitShape& s = g.shape();
  out << "CGP " << s.n_inputs << ' ' << s.n_layers << ' ' << s.gates_per_layer << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out << ' ';
    out << g[i];
  }
  out << '\n';
}

std::string genotype_to_text(const Genotype& g) {
  std::ostringstream out;
  write_genotype(out, g);
  return out.str();
}

namespace {

bool parse_int(const std::string& token, long long& value) {
  if (token.empty()) return false;
  std::size_t i = token[0] == '-' ? 1 : 0;
  if (i == token.size()) return false;
  long long v = 0;
  for (; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9') return false;
    v = v * 10 + (token[i] - '0');
    if (v > 1'000'000'000'000LL) return false;
  }
  value = token[0] == '-' ? -v : v;
  return true;
}

}  // namespace

Genotype read_genotype(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError(1, "missing 'CGP' header");
  std::istringstream hs(header);
  std::string magic, extra;
  std::string fields[3];
  hs >> magic >> fields[0] >> fields[1] >> fields[2];
  if (magic != "CGP") throw ParseError(1, "expected header 'CGP <n_inputs> <n_layers> <gates_per_layer>'");
  long long dims[3];
  for (int k = 0; k < 3; ++k) {
    if (!parse_int(fields[k], dims[k]) || dims[k] < 1 || dims[k] > 10'000'000) {
      throw ParseError(1, "invalid shape field '" + fields[k] + "'");
    }
  }
  if (hs >> extra) throw ParseError(1, "trailing text in header");
  CircuitShape shape{static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2])};
  try {
    shape.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }

  std::string line;
  if (!std::getline(in, line)) throw ParseError(2, "missing gene line");
  std::istringstream ls(line);
  std::vector<Gene> genes;
  genes.reserve(shape.genotype_length());
  std::string token;
  while (ls >> token) {
    long long v = 0;
    if (!parse_int(token, v)) {
      throw ParseError(2, "locus " + std::to_string(genes.size()) + ": '" + token + "' is not an integer");
    }
    if (genes.size() < shape.genotype_length()) {
      const GeneRange r = legal_range(shape, genes.size());
      if (v < r.lo || v > r.hi) {
        throw ParseError(2, "locus " + std::to_string(genes.size()) + ": gene " + token + " outside legal range [" +
                                std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]");
      }
    }
    genes.push_back(static_cast<Gene>(v));
  }
  if (genes.size() != shape.genotype_length()) {
    throw ParseError(2, "expected " + std::to_string(shape.genotype_length()) + " genes for shape, found " +
                            std::to_string(genes.size()));
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw ParseError(3, "unexpected text after gene line");
  }
  return Genotype(shape, std::move(genes));
}

Genotype genotype_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_genotype(in);
}

Genotype load_genotype(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open genotype file '" + path + "'");
  try {
    return read_genotype(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

void save_genotype(const std::string& path, const Genotype& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write genotype file '" + path + "'");
  write_genotype(out, g);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace cgplab
