#include "cgplab/cgplab.h"

#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "cgplab/circuit.hpp"
#include "cgplab/errors.hpp"
#include "cgplab/harness.hpp"

struct cgp_options {
  cgplab::Options options;
};

struct cgp_genotype {
  cgplab::Genotype genotype;
};

namespace {

thread_local std::string g_last_error;

cgp_status fail(cgp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps exceptions from the core onto status codes.
template <class F>
cgp_status guarded(F&& fn) {
  try {
    g_last_error.clear();
    fn();
    return CGP_OK;
  } catch (const cgplab::ParseError& e) {
    return fail(CGP_ERR_PARSE, e.what());
  } catch (const cgplab::DecodeError& e) {
    return fail(CGP_ERR_PARSE, e.what());
  } catch (const cgplab::ConfigError& e) {
    return fail(CGP_ERR_CONFIG, e.what());
  } catch (const cgplab::IoError& e) {
    return fail(CGP_ERR_IO, e.what());
  } catch (const cgplab::UndefinedStatistic& e) {
    return fail(CGP_ERR_UNDEFINED, e.what());
  } catch (const std::out_of_range& e) {
    return fail(CGP_ERR_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CGP_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CGP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CGP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CGP_ERR_INTERNAL, "unknown error");
  }
}

#define CGP_REQUIRE(ptr)                                                      \
  do {                                                                        \
    if ((ptr) == nullptr) return fail(CGP_ERR_ARGUMENT, #ptr " is null"); \
  } while (0)

}  // namespace

extern "C" {

const char* cgp_version(void) { return "1.0.0"; }

const char* cgp_status_string(cgp_status status) {
  switch (status) {
    case CGP_OK: return "ok";
    case CGP_ERR_ARGUMENT: return "invalid argument";
    case CGP_ERR_CONFIG: return "configuration error";
    case CGP_ERR_PARSE: return "parse error";
    case CGP_ERR_IO: return "i/o error";
    case CGP_ERR_RANGE: return "out of range";
    case CGP_ERR_UNDEFINED: return "undefined statistic";
    case CGP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cgp_last_error(void) { return g_last_error.c_str(); }

cgp_status cgp_options_create(cgp_options** out) {
  CGP_REQUIRE(out);
  return guarded([&] { *out = new cgp_options{}; });
}

void cgp_options_destroy(cgp_options* opts) { delete opts; }

cgp_status cgp_options_set(cgp_options* opts, const char* key, const char* value) {
  CGP_REQUIRE(opts);
  CGP_REQUIRE(key);
  CGP_REQUIRE(value);
  return guarded([&] { opts->options.set(key, value); });
}

cgp_status cgp_run(const cgp_options* opts, cgp_summary* summary) {
  CGP_REQUIRE(opts);
  return guarded([&] {
    const auto out = cgplab::cmd_run(cgplab::experiment_from_options(opts->options));
    if (summary != nullptr) {
      const auto& s = out.summary;
      *summary = cgp_summary{s.replications,
                             s.successes,
                             s.fraction_optimal,
                             s.mean_evals_to_optimal.has_value() ? 1 : 0,
                             s.mean_evals_to_optimal.value_or(0.0),
                             s.mean_functional_size};
    }
  });
}

cgp_status cgp_sweep(const cgp_options* opts, size_t* rows) {
  CGP_REQUIRE(opts);
  return guarded([&] {
    const cgplab::SweepSpec spec = cgplab::sweep_from_options(opts->options);
    // The base configuration takes the first entry of every list; the sweep
    // overrides those per cell.
    cgplab::Options base = opts->options;
    for (const char* key : {"mut-rate", "stochasticity", "lambda", "mu", "variations", "interbreeding"}) {
      if (const auto v = base.get(key)) base.set(key, v->substr(0, v->find(',')));
    }
    const auto result = cgplab::cmd_sweep(cgplab::experiment_from_options(base), spec);
    if (rows != nullptr) *rows = result.size();
  });
}

cgp_status cgp_measure(const cgp_options* opts, const cgp_genotype* g, cgp_measure_report* report) {
  CGP_REQUIRE(opts);
  CGP_REQUIRE(g);
  CGP_REQUIRE(report);
  return guarded([&] {
    const auto settings = cgplab::measure_from_options(opts->options);
    const auto target =
        cgplab::resolve_target(opts->options.get("target").value_or("parity5"), g->genotype.shape().n_inputs);
    const auto r = cgplab::measure_all(g->genotype, target, settings);
    *report = cgp_measure_report{r.fitness,
                                 r.phenotypic_complexity,
                                 r.robustness_multi,
                                 r.robustness_single,
                                 r.neutrality_single,
                                 r.functional_neutrality,
                                 r.phenotypic_variability,
                                 r.size_change.p_larger(),
                                 r.size_change.p_equal(),
                                 r.size_change.p_smaller(),
                                 r.settings.n_samples};
  });
}

cgp_status cgp_analyze(const cgp_options* opts, const char* records_dir, size_t* circuits) {
  CGP_REQUIRE(opts);
  CGP_REQUIRE(records_dir);
  return guarded([&] {
    const auto result = cgplab::cmd_analyze(records_dir, cgplab::analysis_from_options(opts->options));
    if (circuits != nullptr) *circuits = result.circuits.size();
  });
}

cgp_status cgp_genotype_load(const char* path, cgp_genotype** out) {
  CGP_REQUIRE(path);
  CGP_REQUIRE(out);
  return guarded([&] { *out = new cgp_genotype{cgplab::load_genotype(path)}; });
}

cgp_status cgp_genotype_parse(const char* text, cgp_genotype** out) {
  CGP_REQUIRE(text);
  CGP_REQUIRE(out);
  return guarded([&] { *out = new cgp_genotype{cgplab::genotype_from_text(text)}; });
}

cgp_status cgp_genotype_save(const cgp_genotype* g, const char* path) {
  CGP_REQUIRE(g);
  CGP_REQUIRE(path);
  return guarded([&] { cgplab::save_genotype(path, g->genotype); });
}

cgp_status cgp_genotype_random(int n_inputs, int n_layers, int gates_per_layer, uint64_t seed, cgp_genotype** out) {
  CGP_REQUIRE(out);
  return guarded([&] {
    cgplab::Rng rng(seed);
    *out = new cgp_genotype{cgplab::random_genotype({n_inputs, n_layers, gates_per_layer}, rng)};
  });
}

void cgp_genotype_destroy(cgp_genotype* g) { delete g; }

size_t cgp_genotype_length(const cgp_genotype* g) { return g == nullptr ? 0 : g->genotype.size(); }

cgp_status cgp_genotype_genes(const cgp_genotype* g, int32_t* buf, size_t len) {
  CGP_REQUIRE(g);
  if (len > 0) CGP_REQUIRE(buf);
  const auto genes = g->genotype.genes();
  for (size_t i = 0; i < len && i < genes.size(); ++i) buf[i] = genes[i];
  return CGP_OK;
}

cgp_status cgp_genotype_fitness(const cgp_genotype* g, const char* target, double* fitness) {
  CGP_REQUIRE(g);
  CGP_REQUIRE(target);
  CGP_REQUIRE(fitness);
  return guarded([&] {
    const auto t = cgplab::resolve_target(target, g->genotype.shape().n_inputs);
    *fitness = cgplab::fitness_of(cgplab::evaluate_all(cgplab::decode(g->genotype)), t).value;
  });
}

cgp_status cgp_genotype_complexity(const cgp_genotype* g, int* complexity) {
  CGP_REQUIRE(g);
  CGP_REQUIRE(complexity);
  return guarded([&] { *complexity = cgplab::phenotypic_complexity(cgplab::decode(g->genotype)); });
}

cgp_status cgp_genotype_behavior(const cgp_genotype* g, char* buf, size_t len) {
  CGP_REQUIRE(g);
  CGP_REQUIRE(buf);
  return guarded([&] {
    const std::string key = cgplab::behavior_key(cgplab::evaluate_all(cgplab::decode(g->genotype)));
    if (len < key.size() + 1) throw std::invalid_argument("behavior buffer too small");
    key.copy(buf, key.size());
    buf[key.size()] = '\0';
  });
}

}  // extern "C"
