#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgplab/evolve.hpp"
#include "cgplab/fitness.hpp"
#include "cgplab/measures.hpp"

namespace cgplab {

/// String options keyed by CLI flag name without the leading dashes
/// ("mut-rate", "algo", ...). Both the CLI and the C API fill one of these;
/// the *_from_options functions validate and convert.
class Options {
 public:
  /// Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
  std::string target = "parity5";  // builtin parity<n>, or a truth-table path
  AlgorithmConfig algorithm;       // algorithm.seed is replaced per replication
  int replications = 30;
  std::uint64_t base_seed = 1;
  std::filesystem::path out_dir;   // empty: nothing is written
  int workers = 0;                 // 0: one per available core
  std::string experiment_id = "run";
  bool summary_measures = false;   // add mean robustness / variability of final bests
  MeasureSettings measure;         // used when summary_measures is set

  /// Throws ConfigError.
  void validate() const;
};

/// Cartesian product of parameter lists. `structural` holds lambda, mu or
/// variations depending on the algorithm; `interbreedings` applies to PSHC.
struct SweepSpec {
  std::vector<double> mut_rates;
  std::vector<double> stochasticities;
  std::vector<int> structural;
  std::vector<double> interbreedings;
};

struct SummaryRow {
  std::string experiment_id;
  AlgorithmConfig params;
  int replications = 0;
  int successes = 0;
  double fraction_optimal = 0.0;  // percent
  std::optional<double> mean_evals_to_optimal;
  double mean_functional_size = 0.0;
  std::optional<double> mean_robustness;
  std::optional<double> mean_variability;
};

struct RunOutput {
  std::vector<RunRecord> records;
  SummaryRow summary;
};

/// Seed of replication `index`.
std::uint64_t replication_seed(std::uint64_t base_seed, int index);

/// "parity<n>" builtins or a truth-table file. Throws ConfigError when the
/// target's input count differs from `n_inputs`.
TargetFunction resolve_target(const std::string& spec, int n_inputs);

ExperimentConfig experiment_from_options(const Options& o);
/// Lists are comma separated; every list must be non-empty.
SweepSpec sweep_from_options(const Options& o);
MeasureSettings measure_from_options(const Options& o);

SummaryRow summarize(const std::string& experiment_id, const AlgorithmConfig& params,
                     const std::vector<RunRecord>& records);

/// Runs the replications (in parallel), then writes, under out_dir:
///   records.csv, summary.csv, runs/rep_NNNN.json,
///   snapshots/rep_NNNN_{begin,first_optimal,end}.cgp
RunOutput cmd_run(const ExperimentConfig& cfg);

/// One cmd_run per grid cell (cells in lexicographic parameter order, all
/// cells sharing the base seed). Writes cell_NNN/ subdirectories plus a
/// combined records.csv and summary.csv.
std::vector<SummaryRow> cmd_sweep(const ExperimentConfig& base, const SweepSpec& sweep);

/// Full measure report of a stored genotype; also reports its fitness.
MeasureReport cmd_measure(const std::string& genotype_file, const std::string& target_spec,
                          const MeasureSettings& settings);

enum class AnalysisCircuits { FinalPopulation, FinalBest, FirstOptimal };

struct AnalysisOptions {
  AnalysisCircuits circuits = AnalysisCircuits::FinalPopulation;
  int n_samples = 10'000;
  VariabilityOptions variability{};
  std::uint64_t seed = 1;
  int workers = 0;
  std::string target = "parity5";
  std::filesystem::path out_dir;  // empty: records directory
};

AnalysisOptions analysis_from_options(const Options& o);

struct CircuitRow {
  std::string record;
  int member = 0;
  double fitness = 0.0;
  int complexity = 0;
  double robustness = 0.0;
  std::int64_t variability = 0;
};

struct Correlation {
  std::string x;
  std::string y;
  std::optional<double> rho;  // empty when undefined
};

struct DiversityRow {
  std::string record;
  std::size_t population = 0;
  std::optional<double> diversity;  // empty for single-member populations
};

struct AnalysisResult {
  std::vector<CircuitRow> circuits;
  std::vector<Correlation> correlations;
  std::vector<DiversityRow> diversity;
};

/// Loads every run record below `records_dir`, measures the selected
/// circuits and writes analysis_circuits.csv, analysis_correlations.csv and
/// analysis_diversity.csv. Throws ConfigError with fewer than two circuits.
AnalysisResult cmd_analyze(const std::filesystem::path& records_dir, const AnalysisOptions& opts);

/// Analysis over in-memory records (no files).
AnalysisResult analyze_records(const std::vector<std::pair<std::string, RunRecord>>& records,
                               const AnalysisOptions& opts);

/// Shortest round-trip decimal form.
std::string format_number(double v);

std::string records_csv_header();
std::string records_csv_row(const std::string& experiment_id, int replication, const RunRecord& r);
std::string summary_csv_header();
std::string summary_csv_row(const SummaryRow& row);
std::string measure_csv_header();
std::string measure_csv_row(const MeasureReport& r);

}  // namespace cgplab
