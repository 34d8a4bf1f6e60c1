/*
 * cgplab C API.
 *
 * Opaque handles plus status codes. Every function returning cgp_status
 * leaves a human-readable message retrievable with cgp_last_error() on the
 * calling thread when it fails. Handles are not thread-safe; use one per
 * thread or serialize access.
 */
#ifndef CGPLAB_H
#define CGPLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(CGPLAB_BUILDING_LIBRARY)
#define CGPLAB_API __attribute__((visibility("default")))
#else
#define CGPLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cgp_status {
  CGP_OK = 0,
  CGP_ERR_ARGUMENT = 1,  /* null pointer, bad value, shape mismatch */
  CGP_ERR_CONFIG = 2,    /* invalid experiment configuration */
  CGP_ERR_PARSE = 3,     /* malformed genotype / truth table / record file */
  CGP_ERR_IO = 4,        /* file system failure */
  CGP_ERR_RANGE = 5,     /* index or gene outside its legal range */
  CGP_ERR_UNDEFINED = 6, /* statistic undefined for the data */
  CGP_ERR_INTERNAL = 7
} cgp_status;

typedef struct cgp_options cgp_options;
typedef struct cgp_genotype cgp_genotype;

typedef struct cgp_summary {
  int replications;
  int successes;
  double fraction_optimal; /* percent */
  int has_mean_evals;
  double mean_evals_to_optimal;
  double mean_functional_size;
} cgp_summary;

typedef struct cgp_measure_report {
  double fitness;
  int phenotypic_complexity;
  double robustness_multi;
  double robustness_single;
  double neutrality_single;
  double functional_neutrality;
  int64_t phenotypic_variability;
  double p_larger;
  double p_equal;
  double p_smaller;
  int n_samples;
} cgp_measure_report;

CGPLAB_API const char* cgp_version(void);
CGPLAB_API const char* cgp_status_string(cgp_status status);
/* Message of the last failure on this thread ("" if none). */
CGPLAB_API const char* cgp_last_error(void);

/* Options: string key/value pairs named like the CLI flags without the
 * leading dashes ("algo", "mut-rate", "replications", "out", ...). List
 * values for sweeps are comma separated. */
CGPLAB_API cgp_status cgp_options_create(cgp_options** out);
CGPLAB_API void cgp_options_destroy(cgp_options* opts);
CGPLAB_API cgp_status cgp_options_set(cgp_options* opts, const char* key, const char* value);

/* Runs the configured replications and writes outputs under "out". */
CGPLAB_API cgp_status cgp_run(const cgp_options* opts, cgp_summary* summary);
/* Runs the parameter grid; *rows receives the number of summary rows. */
CGPLAB_API cgp_status cgp_sweep(const cgp_options* opts, size_t* rows);
/* Measures a genotype against the "target" option. */
CGPLAB_API cgp_status cgp_measure(const cgp_options* opts, const cgp_genotype* g, cgp_measure_report* report);
/* Analyzes run records below records_dir; outputs go to "out" (default:
 * records_dir). *circuits receives the number of analyzed circuits. */
CGPLAB_API cgp_status cgp_analyze(const cgp_options* opts, const char* records_dir, size_t* circuits);

/* Genotypes, in the "CGP <inputs> <layers> <gates_per_layer>" text format. */
CGPLAB_API cgp_status cgp_genotype_load(const char* path, cgp_genotype** out);
CGPLAB_API cgp_status cgp_genotype_parse(const char* text, cgp_genotype** out);
CGPLAB_API cgp_status cgp_genotype_save(const cgp_genotype* g, const char* path);
CGPLAB_API cgp_status cgp_genotype_random(int n_inputs, int n_layers, int gates_per_layer, uint64_t seed,
                                          cgp_genotype** out);
CGPLAB_API void cgp_genotype_destroy(cgp_genotype* g);
CGPLAB_API size_t cgp_genotype_length(const cgp_genotype* g);
/* Copies min(len, genotype length) genes into buf. */
CGPLAB_API cgp_status cgp_genotype_genes(const cgp_genotype* g, int32_t* buf, size_t len);
CGPLAB_API cgp_status cgp_genotype_fitness(const cgp_genotype* g, const char* target, double* fitness);
CGPLAB_API cgp_status cgp_genotype_complexity(const cgp_genotype* g, int* complexity);
/* Writes the canonical 2^n-character behavior key plus NUL; fails with
 * CGP_ERR_ARGUMENT if len is too small. */
CGPLAB_API cgp_status cgp_genotype_behavior(const cgp_genotype* g, char* buf, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* CGPLAB_H */
