#include "cgplab/record_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cgplab/errors.hpp"

namespace cgplab {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "cgplab-run/1";

json scored_to_json(const ScoredGenotype& s) {
  return json{{"fitness", s.fitness.value},
              {"genes", std::vector<Gene>(s.genotype.genes().begin(), s.genotype.genes().end())}};
}

ScoredGenotype scored_from_json(const json& j, const CircuitShape& shape) {
  return {Genotype(shape, j.at("genes").get<std::vector<Gene>>()), Fitness{j.at("fitness").get<double>()}};
}

json config_to_json(const AlgorithmConfig& c) {
  json j{{"algo", algorithm_name(c.variant)},
         {"mut_rate", c.mut_rate},
         {"stochasticity", c.stochasticity},
         {"max_evaluations", c.max_evaluations},
         {"seed", c.seed},
         {"shape", {c.shape.n_inputs, c.shape.n_layers, c.shape.gates_per_layer}}};
  if (const auto* v = std::get_if<OnePlusLambda>(&c.variant)) {
    j["lambda"] = v->lambda;
  } else if (const auto* v = std::get_if<MuPlusOne>(&c.variant)) {
    j["mu"] = v->mu;
  } else if (const auto* v = std::get_if<Pshc>(&c.variant)) {
    j["pop"] = v->pop_size;
    j["variations"] = v->variations;
    j["interbreeding"] = v->interbreeding;
    j["interbreeding_placement"] = v->placement == InterbreedingPlacement::PerParent ? "per-parent" : "per-generation";
  }
  return j;
}

AlgorithmConfig config_from_json(const json& j) {
  AlgorithmConfig c;
  const auto algo = j.at("algo").get<std::string>();
  if (algo == "one-plus-lambda") {
    c.variant = OnePlusLambda{j.at("lambda").get<int>()};
  } else if (algo == "mu-plus-one") {
    c.variant = MuPlusOne{j.at("mu").get<int>()};
  } else if (algo == "pshc") {
    const auto placement = j.at("interbreeding_placement").get<std::string>();
    if (placement != "per-parent" && placement != "per-generation") {
      throw ParseError(0, "unknown interbreeding placement '" + placement + "'");
    }
    c.variant = Pshc{j.at("pop").get<int>(), j.at("variations").get<int>(), j.at("interbreeding").get<double>(),
                     placement == "per-parent" ? InterbreedingPlacement::PerParent
                                               : InterbreedingPlacement::PerGeneration};
  } else {
    throw ParseError(0, "unknown algorithm '" + algo + "'");
  }
  c.mut_rate = j.at("mut_rate").get<double>();
  c.stochasticity = j.at("stochasticity").get<double>();
  c.max_evaluations = j.at("max_evaluations").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto shape = j.at("shape").get<std::vector<int>>();
  if (shape.size() != 3) throw ParseError(0, "shape must have three entries");
  c.shape = {shape[0], shape[1], shape[2]};
  return c;
}

}  // namespace

std::string run_record_to_json(const RunRecord& r) {
  json traj = json::array();
  for (const auto& p : r.trajectory) traj.push_back({p.evaluations, p.best_fitness});
  json pop = json::array();
  for (const auto& s : r.final_population) pop.push_back(scored_to_json(s));
  json doc{{"format", kFormat},
           {"config", config_to_json(r.config)},
           {"success", r.success},
           {"evaluations_to_optimal", r.evaluations_to_optimal ? json(*r.evaluations_to_optimal) : json(nullptr)},
           {"evaluations_used", r.evaluations_used},
           {"snapshots",
            {{"first_generation_best", scored_to_json(r.first_generation_best)},
             {"first_optimal", r.first_optimal ? scored_to_json(*r.first_optimal) : json(nullptr)},
             {"final_best", scored_to_json(r.final_best)}}},
           {"final_population", std::move(pop)},
           {"trajectory", std::move(traj)}};
  return doc.dump(1) + "\n";
}

RunRecord run_record_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormat) throw ParseError(0, "unsupported run record format");
    AlgorithmConfig config = config_from_json(doc.at("config"));
    config.shape.validate();
    const CircuitShape shape = config.shape;
    const json& snaps = doc.at("snapshots");
    RunRecord r{std::move(config),
                doc.at("success").get<bool>(),
                std::nullopt,
                doc.at("evaluations_used").get<std::int64_t>(),
                scored_from_json(snaps.at("first_generation_best"), shape),
                std::nullopt,
                scored_from_json(snaps.at("final_best"), shape),
                {},
                {}};
    if (!doc.at("evaluations_to_optimal").is_null()) {
      r.evaluations_to_optimal = doc.at("evaluations_to_optimal").get<std::int64_t>();
    }
    if (!snaps.at("first_optimal").is_null()) r.first_optimal = scored_from_json(snaps.at("first_optimal"), shape);
    for (const auto& s : doc.at("final_population")) r.final_population.push_back(scored_from_json(s, shape));
    for (const auto& p : doc.at("trajectory")) {
      r.trajectory.push_back({p.at(0).get<std::int64_t>(), p.at(1).get<double>()});
    }
    if (r.success != r.evaluations_to_optimal.has_value()) {
      throw ParseError(0, "success flag disagrees with evaluations_to_optimal");
    }
    return r;
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("run record: ") + e.what());
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("run record: ") + e.what());
  }
}

void save_run_record(const std::string& path, const RunRecord& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write run record '" + path + "'");
  out << run_record_to_json(r);
  if (!out) throw IoError("write failed for '" + path + "'");
}

RunRecord load_run_record(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open run record '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return run_record_from_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

}  // namespace cgplab
