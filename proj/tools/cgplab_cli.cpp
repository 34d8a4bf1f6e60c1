// cgplab command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cgplab/cgplab.h"

namespace {

struct OptionsDeleter {
  void operator()(cgp_options* o) const { cgp_options_destroy(o); }
};
struct GenotypeDeleter {
  void operator()(cgp_genotype* g) const { cgp_genotype_destroy(g); }
};
using OptionsPtr = std::unique_ptr<cgp_options, OptionsDeleter>;
using GenotypePtr = std::unique_ptr<cgp_genotype, GenotypeDeleter>;

int report(cgp_status status) {
  std::cerr << "cgplab: " << cgp_status_string(status) << ": " << cgp_last_error() << '\n';
  switch (status) {
    case CGP_ERR_CONFIG:
    case CGP_ERR_PARSE:
    case CGP_ERR_ARGUMENT:
    case CGP_ERR_RANGE: return 2;
    default: return 1;
  }
}

void print_file(const std::string& path) {
  std::ifstream in(path);
  if (in) std::cout << in.rdbuf();
}

std::string join(const std::string& dir, const std::string& file) {
  return dir.empty() || dir.back() == '/' ? dir + file : dir + "/" + file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartesian genetic programming lab: evolve and analyze feed-forward logic circuits"};
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);

  // Every value is forwarded to the library as text; validation happens there.
  std::map<std::string, std::string> values;
  const auto add = [&](const std::string& name, const std::string& help) {
    app.add_option("--" + name, values[name], help);
  };
  add("algo", "one-plus-lambda | mu-plus-one | pshc (default one-plus-lambda)");
  add("mut-rate", "per-locus mutation probability (list for sweep)");
  add("stochasticity", "fitness noise half-width (list for sweep)");
  add("lambda", "offspring per generation, one-plus-lambda (list for sweep)");
  add("mu", "parents, mu-plus-one (list for sweep)");
  add("pop", "parents, pshc");
  add("variations", "variation chain length, pshc (list for sweep)");
  add("interbreeding", "probability of replacing the worst parent, pshc (default 0.05; list for sweep)");
  add("interbreeding-placement", "per-parent | per-generation (default per-parent)");
  add("replications", "independent runs per configuration (default 30)");
  add("seed", "base seed (default 1)");
  add("max-evals", "evaluation budget per run (default 6000000)");
  add("target", "parity5 or a truth-table file (default parity5)");
  add("out", "output directory (default cgplab-out for run/sweep)");
  add("workers", "parallel workers (default: one per core)");
  add("inputs", "circuit inputs (default 5)");
  add("layers", "gate layers (default 20)");
  add("gates-per-layer", "gates per layer (default 20)");
  add("experiment-id", "experiment id written to records (default run)");
  add("samples", "offspring sampled per measure (default 10000)");
  add("walks", "variability random walks (default 10)");
  add("walk-len", "steps per walk (default 1000)");
  add("per-walk-uniqueness", "count unique behaviors per walk instead of globally (true/false)");
  add("circuits", "analyze: final | best | first-optimal (default final)");
  add("summary-measures", "add mean robustness/variability of final circuits to summaries (true/false)");

  auto* run = app.add_subcommand("run", "run replications of one configuration");
  auto* sweep = app.add_subcommand("sweep", "run the Cartesian product of parameter lists");
  auto* measure = app.add_subcommand("measure", "measure robustness, neutrality, complexity and variability");
  std::string genotype_file;
  measure->add_option("genotype", genotype_file, "genotype file")->required();
  auto* analyze = app.add_subcommand("analyze", "correlations and diversity over stored run records");
  std::string records_dir;
  analyze->add_option("records", records_dir, "directory holding run records")->required();
  for (auto* sub : {run, sweep, measure, analyze}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  cgp_options* raw = nullptr;
  if (cgp_status s = cgp_options_create(&raw); s != CGP_OK) return report(s);
  OptionsPtr opts(raw);
  for (const auto& [key, value] : values) {
    if (app.count("--" + key) == 0) continue;
    if (cgp_status s = cgp_options_set(opts.get(), key.c_str(), value.c_str()); s != CGP_OK) return report(s);
  }
  const bool has_out = app.count("--out") != 0;
  const std::string out_dir = has_out ? values["out"] : "cgplab-out";

  if (*run || *sweep) {
    if (!has_out) cgp_options_set(opts.get(), "out", out_dir.c_str());
    if (*run) {
      cgp_summary summary{};
      if (cgp_status s = cgp_run(opts.get(), &summary); s != CGP_OK) return report(s);
    } else {
      size_t rows = 0;
      if (cgp_status s = cgp_sweep(opts.get(), &rows); s != CGP_OK) return report(s);
    }
    print_file(join(out_dir, "summary.csv"));
    return 0;
  }

  if (*measure) {
    cgp_genotype* g = nullptr;
    if (cgp_status s = cgp_genotype_load(genotype_file.c_str(), &g); s != CGP_OK) return report(s);
    GenotypePtr genotype(g);
    cgp_measure_report r{};
    if (cgp_status s = cgp_measure(opts.get(), genotype.get(), &r); s != CGP_OK) return report(s);
    std::printf(
        "fitness,phenotypic_complexity,robustness_multi,robustness_single,neutrality_single,"
        "functional_neutrality,phenotypic_variability,p_larger,p_equal,p_smaller,n_samples\n");
    std::printf("%.17g,%d,%.17g,%.17g,%.17g,%.17g,%lld,%.17g,%.17g,%.17g,%d\n", r.fitness, r.phenotypic_complexity,
                r.robustness_multi, r.robustness_single, r.neutrality_single, r.functional_neutrality,
                static_cast<long long>(r.phenotypic_variability), r.p_larger, r.p_equal, r.p_smaller, r.n_samples);
    return 0;
  }

  size_t circuits = 0;
  if (cgp_status s = cgp_analyze(opts.get(), records_dir.c_str(), &circuits); s != CGP_OK) return report(s);
  const std::string analysis_dir = has_out ? out_dir : records_dir;
  std::cout << "circuits analyzed: " << circuits << '\n';
  print_file(join(analysis_dir, "analysis_correlations.csv"));
  return 0;
}
