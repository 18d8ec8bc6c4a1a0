#pragma once

#include <string>
#include <vector>

#include "anneal/bench.hpp"
#include "anneal/hybrid.hpp"
#include "anneal/io.hpp"
#include "anneal/local_search.hpp"

namespace anneal {

// Everything a named method needs; the seed comes from the caller.
struct MethodSettings {
  AnnealConfig sa;
  LocalSearchSpec local_search;
  HybridConfig hybrid = default_hybrid_config();
  EvoConfig evo = default_evo_config();
  double heat_factor = 1.5;
  int snun = 2;
};

// sa, heating, memory, anneal-local, local-anneal, hybrid, sa-saes, sa-sacep,
// nelder-mead, sds.
const std::vector<std::string>& method_names();

bool is_method(const std::string& name);

// Runs `method` with the given seed. Local searchers start from a random
// feasible point drawn from the seed.
Solver make_solver(const std::string& method, const MethodSettings& settings);

// Same, keeping the population rows for the evolutionary methods.
EvoResult run_evolution(const std::string& method, const Problem& problem,
                        const MethodSettings& settings, std::uint64_t seed);

Json to_json(const MethodSettings& settings);
// Reads the keys sa, local_search, hybrid, evo, heat_factor and snun of a
// configuration object; other keys are left to the caller.
MethodSettings method_settings_from_json(const Json& j, const MethodSettings& base = {});

inline const std::vector<std::string> kMethodKeys = {"sa",  "local_search", "hybrid",
                                                     "evo", "heat_factor",  "snun"};

}  // namespace anneal
