#pragma once

#include <string>

#include "cgplab/evolve.hpp"

namespace cgplab {

// RunRecord document (JSON, format tag "cgplab-run/1"):
//   config           algorithm, parameters, budget, seed, shape
//   success, evaluations_to_optimal (null when absent), evaluations_used
//   snapshots        first_generation_best / first_optimal (nullable) / final_best
//   final_population [{fitness, genes}]
//   trajectory       [[evaluations, best_fitness], ...]
// Serialization is deterministic: equal records give identical bytes.

std::string run_record_to_json(const RunRecord& r);
/// Throws ParseError on malformed documents or invalid genotypes.
RunRecord run_record_from_json(const std::string& text);

void save_run_record(const std::string& path, const RunRecord& r);
RunRecord load_run_record(const std::string& path);

}  // namespace cgplab
