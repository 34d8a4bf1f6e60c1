#include "cgplab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cgplab/circuit.hpp"
#include "cgplab/errors.hpp"
#include "cgplab/record_io.hpp"

namespace cgplab {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Options

const std::vector<std::string>& Options::known_keys() {
  static const std::vector<std::string> keys = {
      "algo",          "mut-rate",     "stochasticity", "lambda",  "mu",
      "pop",           "variations",   "interbreeding", "interbreeding-placement",
      "replications",  "seed",         "max-evals",     "target",  "out",
      "workers",       "inputs",       "layers",        "gates-per-layer",
      "experiment-id", "samples",      "walks",         "walk-len", "per-walk-uniqueness",
      "circuits",      "summary-measures",
  };
  return keys;
}

void Options::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown option '" + key + "'");
  values_[key] = value;
}

std::optional<std::string> Options::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("option '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("option '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("option '" + key + "': '" + text + "' is not a non-negative integer");
  }
  return v;
}

int to_int32(const std::string& key, const std::string& text) {
  const std::int64_t v = to_int(key, text);
  if (v < -2'000'000'000 || v > 2'000'000'000) throw ConfigError("option '" + key + "' out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("option '" + key + "': '" + text + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("option '" + key + "': empty list entry");
    items.push_back(item);
  }
  if (items.empty()) throw ConfigError("option '" + key + "': empty value list");
  return items;
}

double opt_double(const Options& o, const std::string& key, double fallback) {
  const auto v = o.get(key);
  return v ? to_double(key, *v) : fallback;
}

int opt_int(const Options& o, const std::string& key, int fallback) {
  const auto v = o.get(key);
  return v ? to_int32(key, *v) : fallback;
}

struct AlgoDefaults {
  double mut_rate;
  double stochasticity;
};

// Best-performing settings per algorithm on 5-bit parity.
AlgoDefaults defaults_for(const std::string& algo) {
  if (algo == "mu-plus-one") return {0.02, 0.05};
  if (algo == "pshc") return {0.02, 0.0};
  return {0.03, 0.0};
}

InterbreedingPlacement placement_from_options(const Options& o) {
  const std::string placement = o.get("interbreeding-placement").value_or("per-parent");
  if (placement == "per-parent") return InterbreedingPlacement::PerParent;
  if (placement == "per-generation") return InterbreedingPlacement::PerGeneration;
  throw ConfigError("interbreeding-placement must be per-parent or per-generation");
}

// Every algorithm-specific option is parsed even when another algorithm is
// selected, so a malformed value never goes unnoticed.
AlgorithmVariant variant_from_options(const Options& o, const std::string& algo) {
  const OnePlusLambda one{opt_int(o, "lambda", 10)};
  const MuPlusOne mu{opt_int(o, "mu", 20)};
  const Pshc pshc{opt_int(o, "pop", 20), opt_int(o, "variations", 100), opt_double(o, "interbreeding", 0.05),
                  placement_from_options(o)};
  if (algo == "one-plus-lambda") return one;
  if (algo == "mu-plus-one") return mu;
  if (algo == "pshc") return pshc;
  throw ConfigError("unknown algorithm '" + algo + "' (expected one-plus-lambda, mu-plus-one or pshc)");
}

template <class F>
void parallel_for(std::size_t n, int workers, F&& fn) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                    : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string rep_name(int rep) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rep_%04d", rep);
  return buf;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

int functional_size(const Genotype& g) { return phenotypic_complexity(decode(g)); }

struct ParamColumns {
  std::string mu, lambda, variations, interbreeding;
};

ParamColumns param_columns(const AlgorithmConfig& c) {
  ParamColumns p;
  if (const auto* v = std::get_if<OnePlusLambda>(&c.variant)) {
    p.lambda = std::to_string(v->lambda);
  } else if (const auto* v = std::get_if<MuPlusOne>(&c.variant)) {
    p.mu = std::to_string(v->mu);
  } else if (const auto* v = std::get_if<Pshc>(&c.variant)) {
    p.mu = std::to_string(v->pop_size);  // parent count
    p.variations = std::to_string(v->variations);
    p.interbreeding = format_number(v->interbreeding);
  }
  return p;
}

}  // namespace

std::string format_number(double v) {
  char buf[128];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc()) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  algorithm.validate();
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (experiment_id.empty()) throw ConfigError("experiment id must not be empty");
  if (summary_measures && measure.n_samples < 1) throw ConfigError("samples must be >= 1");
}

std::uint64_t replication_seed(std::uint64_t base_seed, int index) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(index));
}

TargetFunction resolve_target(const std::string& spec, int n_inputs) {
  TargetFunction t;
  if (spec.rfind("parity", 0) == 0 && spec.size() > 6 &&
      spec.find_first_not_of("0123456789", 6) == std::string::npos) {
    int n = 0;
    std::from_chars(spec.data() + 6, spec.data() + spec.size(), n);
    if (n < 1 || n > 24) throw ConfigError("target '" + spec + "': parity width must be in [1, 24]");
    t = even_parity_target(n);
  } else {
    if (!fs::exists(spec)) throw ConfigError("target '" + spec + "' is neither a builtin (parity<n>) nor a file");
    t = load_truth_table(spec);
  }
  if (t.n_inputs() != n_inputs) {
    throw ConfigError("target '" + spec + "' has " + std::to_string(t.n_inputs()) + " inputs, circuit shape has " +
                      std::to_string(n_inputs));
  }
  return t;
}

ExperimentConfig experiment_from_options(const Options& o) {
  ExperimentConfig cfg;
  const std::string algo = o.get("algo").value_or("one-plus-lambda");
  const AlgoDefaults d = defaults_for(algo);
  cfg.algorithm.variant = variant_from_options(o, algo);
  cfg.algorithm.mut_rate = opt_double(o, "mut-rate", d.mut_rate);
  cfg.algorithm.stochasticity = opt_double(o, "stochasticity", d.stochasticity);
  if (const auto v = o.get("max-evals")) cfg.algorithm.max_evaluations = to_int("max-evals", *v);
  cfg.algorithm.shape = {opt_int(o, "inputs", 5), opt_int(o, "layers", 20), opt_int(o, "gates-per-layer", 20)};
  cfg.target = o.get("target").value_or("parity5");
  cfg.replications = opt_int(o, "replications", 30);
  if (const auto v = o.get("seed")) cfg.base_seed = to_u64("seed", *v);
  cfg.algorithm.seed = cfg.base_seed;
  cfg.out_dir = o.get("out").value_or("");
  cfg.workers = opt_int(o, "workers", 0);
  cfg.experiment_id = o.get("experiment-id").value_or("run");
  if (const auto v = o.get("summary-measures")) cfg.summary_measures = to_bool("summary-measures", *v);
  cfg.measure = measure_from_options(o);
  cfg.measure.mut_rate = cfg.algorithm.mut_rate;
  cfg.validate();
  return cfg;
}

SweepSpec sweep_from_options(const Options& o) {
  const std::string algo = o.get("algo").value_or("one-plus-lambda");
  const AlgoDefaults d = defaults_for(algo);
  const auto doubles = [&](const std::string& key, double fallback) {
    std::vector<double> out;
    if (const auto v = o.get(key)) {
      for (const auto& item : split_list(key, *v)) out.push_back(to_double(key, item));
    } else {
      out.push_back(fallback);
    }
    return out;
  };
  const auto ints = [&](const std::string& key, int fallback) {
    std::vector<int> out;
    if (const auto v = o.get(key)) {
      for (const auto& item : split_list(key, *v)) out.push_back(to_int32(key, item));
    } else {
      out.push_back(fallback);
    }
    return out;
  };
  SweepSpec s;
  s.mut_rates = doubles("mut-rate", d.mut_rate);
  s.stochasticities = doubles("stochasticity", d.stochasticity);
  if (algo == "one-plus-lambda") {
    s.structural = ints("lambda", 10);
  } else if (algo == "mu-plus-one") {
    s.structural = ints("mu", 20);
  } else if (algo == "pshc") {
    s.structural = ints("variations", 100);
    s.interbreedings = doubles("interbreeding", 0.05);
  } else {
    throw ConfigError("unknown algorithm '" + algo + "'");
  }
  return s;
}

MeasureSettings measure_from_options(const Options& o) {
  MeasureSettings s;
  s.mut_rate = opt_double(o, "mut-rate", 0.02);
  s.n_samples = opt_int(o, "samples", 10'000);
  s.variability.walks = opt_int(o, "walks", 10);
  s.variability.walk_len = opt_int(o, "walk-len", 1000);
  if (const auto v = o.get("per-walk-uniqueness")) s.variability.shared_uniqueness = !to_bool("per-walk-uniqueness", *v);
  if (const auto v = o.get("seed")) s.seed = to_u64("seed", *v);
  if (!(s.mut_rate >= 0.0 && s.mut_rate <= 1.0)) throw ConfigError("mut-rate must be in [0, 1]");
  if (s.n_samples < 1) throw ConfigError("samples must be >= 1");
  if (s.variability.walks < 1) throw ConfigError("walks must be >= 1");
  if (s.variability.walk_len < 0) throw ConfigError("walk-len must be >= 0");
  return s;
}

AnalysisOptions analysis_from_options(const Options& o) {
  AnalysisOptions a;
  const std::string circuits = o.get("circuits").value_or("final");
  if (circuits == "final") {
    a.circuits = AnalysisCircuits::FinalPopulation;
  } else if (circuits == "best") {
    a.circuits = AnalysisCircuits::FinalBest;
  } else if (circuits == "first-optimal") {
    a.circuits = AnalysisCircuits::FirstOptimal;
  } else {
    throw ConfigError("circuits must be final, best or first-optimal");
  }
  const MeasureSettings m = measure_from_options(o);
  a.n_samples = m.n_samples;
  a.variability = m.variability;
  a.seed = m.seed;
  a.workers = opt_int(o, "workers", 0);
  if (a.workers < 0) throw ConfigError("workers must be >= 0");
  a.target = o.get("target").value_or("parity5");
  a.out_dir = o.get("out").value_or("");
  return a;
}

// ---------------------------------------------------------------------------
// CSV

std::string records_csv_header() {
  return "experiment_id,algo,mut_rate,stochasticity,mu,lambda,variations,interbreeding,replication,seed,success,"
         "evals_to_optimal,evals_used,final_fitness,functional_size\n";
}

std::string records_csv_row(const std::string& experiment_id, int replication, const RunRecord& r) {
  const ParamColumns p = param_columns(r.config);
  std::ostringstream s;
  s << experiment_id << ',' << algorithm_name(r.config.variant) << ',' << format_number(r.config.mut_rate) << ','
    << format_number(r.config.stochasticity) << ',' << p.mu << ',' << p.lambda << ',' << p.variations << ','
    << p.interbreeding << ',' << replication << ',' << r.config.seed << ',' << (r.success ? 1 : 0) << ','
    << (r.evaluations_to_optimal ? std::to_string(*r.evaluations_to_optimal) : std::string()) << ','
    << r.evaluations_used << ',' << format_number(r.final_best.fitness.value) << ','
    << functional_size(r.final_best.genotype) << '\n';
  return s.str();
}

std::string summary_csv_header() {
  return "experiment_id,algo,mut_rate,stochasticity,mu,lambda,variations,interbreeding,replications,successes,"
         "fraction_optimal,mean_evals_to_optimal,mean_functional_size,mean_robustness,mean_variability\n";
}

std::string summary_csv_row(const SummaryRow& row) {
  const ParamColumns p = param_columns(row.params);
  std::ostringstream s;
  s << row.experiment_id << ',' << algorithm_name(row.params.variant) << ',' << format_number(row.params.mut_rate)
    << ',' << format_number(row.params.stochasticity) << ',' << p.mu << ',' << p.lambda << ',' << p.variations << ','
    << p.interbreeding << ',' << row.replications << ',' << row.successes << ','
    << format_number(row.fraction_optimal) << ',' << opt_number(row.mean_evals_to_optimal) << ','
    << format_number(row.mean_functional_size) << ',' << opt_number(row.mean_robustness) << ','
    << opt_number(row.mean_variability) << '\n';
  return s.str();
}

std::string measure_csv_header() {
  return "fitness,phenotypic_complexity,robustness_multi,robustness_single,neutrality_single,functional_neutrality,"
         "phenotypic_variability,p_larger,p_equal,p_smaller,mut_rate,n_samples,walks,walk_len,shared_uniqueness,"
         "seed\n";
}

std::string measure_csv_row(const MeasureReport& r) {
  std::ostringstream s;
  s << format_number(r.fitness) << ',' << r.phenotypic_complexity << ',' << format_number(r.robustness_multi) << ','
    << format_number(r.robustness_single) << ',' << format_number(r.neutrality_single) << ','
    << format_number(r.functional_neutrality) << ',' << r.phenotypic_variability << ','
    << format_number(r.size_change.p_larger()) << ',' << format_number(r.size_change.p_equal()) << ','
    << format_number(r.size_change.p_smaller()) << ',' << format_number(r.settings.mut_rate) << ','
    << r.settings.n_samples << ',' << r.settings.variability.walks << ',' << r.settings.variability.walk_len << ','
    << (r.settings.variability.shared_uniqueness ? 1 : 0) << ',' << r.settings.seed << '\n';
  return s.str();
}

// ---------------------------------------------------------------------------
// Commands

SummaryRow summarize(const std::string& experiment_id, const AlgorithmConfig& params,
                     const std::vector<RunRecord>& records) {
  SummaryRow row;
  row.experiment_id = experiment_id;
  row.params = params;
  row.replications = static_cast<int>(records.size());
  double evals = 0.0, size = 0.0;
  for (const auto& r : records) {
    if (r.success) {
      ++row.successes;
      evals += static_cast<double>(*r.evaluations_to_optimal);
    }
    size += functional_size(r.final_best.genotype);
  }
  if (!records.empty()) {
    row.fraction_optimal = 100.0 * row.successes / static_cast<double>(records.size());
    row.mean_functional_size = size / static_cast<double>(records.size());
  }
  if (row.successes > 0) row.mean_evals_to_optimal = evals / row.successes;
  return row;
}

namespace {

struct CellJob {
  std::string experiment_id;
  ExperimentConfig cfg;
};

// Runs every replication of every cell as one pool of jobs; results come
// back indexed, independent of completion order.
std::vector<std::vector<RunRecord>> run_cells(const std::vector<CellJob>& cells, int workers) {
  std::vector<std::pair<std::size_t, int>> jobs;
  std::vector<TargetFunction> targets;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].cfg.validate();
    targets.push_back(resolve_target(cells[c].cfg.target, cells[c].cfg.algorithm.shape.n_inputs));
    for (int r = 0; r < cells[c].cfg.replications; ++r) jobs.emplace_back(c, r);
  }
  std::vector<std::vector<std::optional<RunRecord>>> slots(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) slots[c].resize(static_cast<std::size_t>(cells[c].cfg.replications));
  parallel_for(jobs.size(), workers, [&](std::size_t j) {
    const auto [c, r] = jobs[j];
    AlgorithmConfig alg = cells[c].cfg.algorithm;
    alg.seed = replication_seed(cells[c].cfg.base_seed, r);
    slots[c][static_cast<std::size_t>(r)] = run_algorithm(alg, targets[c]);
  });
  std::vector<std::vector<RunRecord>> out(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (auto& rec : slots[c]) out[c].push_back(std::move(*rec));
  }
  return out;
}

void add_summary_measures(SummaryRow& row, const ExperimentConfig& cfg, const std::vector<RunRecord>& records) {
  if (!cfg.summary_measures || records.empty()) return;
  const TargetFunction target = resolve_target(cfg.target, cfg.algorithm.shape.n_inputs);
  std::vector<double> robustness(records.size());
  std::vector<double> variability(records.size());
  parallel_for(records.size(), cfg.workers, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.measure.seed, i));
    const Genotype& g = records[i].final_best.genotype;
    robustness[i] = robustness_multi(g, target, cfg.algorithm.mut_rate, cfg.measure.n_samples, rng);
    variability[i] = static_cast<double>(
        phenotypic_variability(g, target, cfg.algorithm.mut_rate, cfg.measure.variability, rng));
  });
  double r = 0.0, v = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    r += robustness[i];
    v += variability[i];
  }
  row.mean_robustness = r / static_cast<double>(records.size());
  row.mean_variability = v / static_cast<double>(records.size());
}

void write_cell(const fs::path& dir, const std::vector<RunRecord>& records) {
  ensure_dir(dir / "runs");
  ensure_dir(dir / "snapshots");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& r = records[i];
    const std::string name = rep_name(static_cast<int>(i));
    save_run_record((dir / "runs" / (name + ".json")).string(), r);
    save_genotype((dir / "snapshots" / (name + "_begin.cgp")).string(), r.first_generation_best.genotype);
    if (r.first_optimal) {
      save_genotype((dir / "snapshots" / (name + "_first_optimal.cgp")).string(), r.first_optimal->genotype);
    }
    save_genotype((dir / "snapshots" / (name + "_end.cgp")).string(), r.final_best.genotype);
  }
}

}  // namespace

RunOutput cmd_run(const ExperimentConfig& cfg) {
  cfg.validate();
  auto results = run_cells({{cfg.experiment_id, cfg}}, cfg.workers);
  RunOutput out{std::move(results.front()), {}};
  out.summary = summarize(cfg.experiment_id, cfg.algorithm, out.records);
  add_summary_measures(out.summary, cfg, out.records);
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    write_cell(cfg.out_dir, out.records);
    std::string csv = records_csv_header();
    for (std::size_t i = 0; i < out.records.size(); ++i) {
      csv += records_csv_row(cfg.experiment_id, static_cast<int>(i), out.records[i]);
    }
    write_text(cfg.out_dir / "records.csv", csv);
    write_text(cfg.out_dir / "summary.csv", summary_csv_header() + summary_csv_row(out.summary));
  }
  return out;
}

std::vector<SummaryRow> cmd_sweep(const ExperimentConfig& base, const SweepSpec& sweep) {
  base.validate();
  const std::string algo = algorithm_name(base.algorithm.variant);
  if (sweep.mut_rates.empty() || sweep.stochasticities.empty() || sweep.structural.empty()) {
    throw ConfigError("sweep: every value list must be non-empty");
  }
  if (algo == "pshc" && sweep.interbreedings.empty()) throw ConfigError("sweep: interbreeding list is empty");

  auto sorted = [](auto v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto mut_rates = sorted(sweep.mut_rates);
  const auto stochs = sorted(sweep.stochasticities);
  const auto structural = sorted(sweep.structural);
  const auto interbreedings = algo == "pshc" ? sorted(sweep.interbreedings) : std::vector<double>{0.0};

  std::vector<CellJob> cells;
  for (double m : mut_rates) {
    for (double s : stochs) {
      for (int k : structural) {
        for (double ib : interbreedings) {
          ExperimentConfig cfg = base;
          cfg.algorithm.mut_rate = m;
          cfg.algorithm.stochasticity = s;
          cfg.measure.mut_rate = m;
          if (auto* v = std::get_if<OnePlusLambda>(&cfg.algorithm.variant)) {
            v->lambda = k;
          } else if (auto* v = std::get_if<MuPlusOne>(&cfg.algorithm.variant)) {
            v->mu = k;
          } else if (auto* v = std::get_if<Pshc>(&cfg.algorithm.variant)) {
            v->variations = k;
            v->interbreeding = ib;
          }
          char id[32];
          std::snprintf(id, sizeof id, "cell_%03zu", cells.size());
          cfg.experiment_id = id;
          cfg.validate();
          cells.push_back({id, std::move(cfg)});
        }
      }
    }
  }

  const auto results = run_cells(cells, base.workers);
  std::vector<SummaryRow> rows;
  std::string records_csv = records_csv_header();
  std::string summary_csv = summary_csv_header();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SummaryRow row = summarize(cells[c].experiment_id, cells[c].cfg.algorithm, results[c]);
    add_summary_measures(row, cells[c].cfg, results[c]);
    for (std::size_t i = 0; i < results[c].size(); ++i) {
      records_csv += records_csv_row(cells[c].experiment_id, static_cast<int>(i), results[c][i]);
    }
    summary_csv += summary_csv_row(row);
    rows.push_back(std::move(row));
  }
  if (!base.out_dir.empty()) {
    ensure_dir(base.out_dir);
    for (std::size_t c = 0; c < cells.size(); ++c) write_cell(base.out_dir / cells[c].experiment_id, results[c]);
    write_text(base.out_dir / "records.csv", records_csv);
    write_text(base.out_dir / "summary.csv", summary_csv);
  }
  return rows;
}

MeasureReport cmd_measure(const std::string& genotype_file, const std::string& target_spec,
                          const MeasureSettings& settings) {
  const Genotype g = load_genotype(genotype_file);
  const TargetFunction target = resolve_target(target_spec, g.shape().n_inputs);
  return measure_all(g, target, settings);
}

AnalysisResult analyze_records(const std::vector<std::pair<std::string, RunRecord>>& records,
                               const AnalysisOptions& opts) {
  struct Item {
    std::string record;
    int member;
    const Genotype* genotype;
    double mut_rate;
  };
  std::vector<Item> items;
  AnalysisResult result;
  for (const auto& [name, r] : records) {
    switch (opts.circuits) {
      case AnalysisCircuits::FinalPopulation:
        for (std::size_t m = 0; m < r.final_population.size(); ++m) {
          items.push_back({name, static_cast<int>(m), &r.final_population[m].genotype, r.config.mut_rate});
        }
        break;
      case AnalysisCircuits::FinalBest:
        items.push_back({name, 0, &r.final_best.genotype, r.config.mut_rate});
        break;
      case AnalysisCircuits::FirstOptimal:
        if (r.first_optimal) items.push_back({name, 0, &r.first_optimal->genotype, r.config.mut_rate});
        break;
    }
    DiversityRow d{name, r.final_population.size(), std::nullopt};
    if (r.final_population.size() >= 2) {
      std::vector<Genotype> pop;
      for (const auto& s : r.final_population) pop.push_back(s.genotype);
      d.diversity = population_diversity(pop);
    }
    result.diversity.push_back(std::move(d));
  }
  if (items.size() < 2) throw ConfigError("analyze: need at least two circuits, found " + std::to_string(items.size()));

  std::optional<TargetFunction> target;
  result.circuits.resize(items.size());
  target = resolve_target(opts.target, items.front().genotype->shape().n_inputs);
  parallel_for(items.size(), opts.workers, [&](std::size_t i) {
    const Item& it = items[i];
    Rng rng(derive_seed(opts.seed, i));
    CircuitRow row{it.record, it.member, 0.0, 0, 0.0, 0};
    Evaluator eval(it.genotype->shape(), *target);
    row.fitness = eval.score(*it.genotype).value;
    row.complexity = eval.last_complexity();
    row.robustness = robustness_multi(*it.genotype, *target, it.mut_rate, opts.n_samples, rng);
    row.variability = phenotypic_variability(*it.genotype, *target, it.mut_rate, opts.variability, rng);
    result.circuits[i] = std::move(row);
  });

  std::map<std::string, std::vector<double>> columns;
  for (const auto& c : result.circuits) {
    columns["fitness"].push_back(c.fitness);
    columns["complexity"].push_back(static_cast<double>(c.complexity));
    columns["robustness"].push_back(c.robustness);
    columns["variability"].push_back(static_cast<double>(c.variability));
  }
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"fitness", "complexity"},   {"robustness", "complexity"}, {"variability", "complexity"},
      {"fitness", "robustness"},   {"fitness", "variability"},   {"robustness", "variability"},
  };
  for (const auto& [x, y] : pairs) {
    Correlation c{x, y, std::nullopt};
    try {
      c.rho = spearman_rho(columns[x], columns[y]);
    } catch (const UndefinedStatistic&) {
    }
    result.correlations.push_back(std::move(c));
  }
  return result;
}

AnalysisResult cmd_analyze(const fs::path& records_dir, const AnalysisOptions& opts) {
  if (!fs::is_directory(records_dir)) throw IoError("records directory '" + records_dir.string() + "' not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(records_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        entry.path().parent_path().filename() == "runs") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("analyze: no run records under '" + records_dir.string() + "'");
  std::vector<std::pair<std::string, RunRecord>> records;
  for (const auto& f : files) {
    records.emplace_back(fs::relative(f, records_dir).generic_string(), load_run_record(f.string()));
  }
  AnalysisResult result = analyze_records(records, opts);

  const fs::path out = opts.out_dir.empty() ? records_dir : opts.out_dir;
  ensure_dir(out);
  std::string circuits = "record,member,fitness,complexity,robustness,variability\n";
  for (const auto& c : result.circuits) {
    circuits += c.record + ',' + std::to_string(c.member) + ',' + format_number(c.fitness) + ',' +
                std::to_string(c.complexity) + ',' + format_number(c.robustness) + ',' +
                std::to_string(c.variability) + '\n';
  }
  std::string corr = "x,y,n,rho\n";
  for (const auto& c : result.correlations) {
    corr += c.x + ',' + c.y + ',' + std::to_string(result.circuits.size()) + ',' +
            (c.rho ? format_number(*c.rho) : std::string("NA")) + '\n';
  }
  std::string div = "record,population,diversity\n";
  for (const auto& d : result.diversity) {
    div += d.record + ',' + std::to_string(d.population) + ',' +
           (d.diversity ? format_number(*d.diversity) : std::string("NA")) + '\n';
  }
  write_text(out / "analysis_circuits.csv", circuits);
  write_text(out / "analysis_correlations.csv", corr);
  write_text(out / "analysis_diversity.csv", div);
  return result;
}

}  // namespace cgplab
