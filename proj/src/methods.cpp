#include "anneal/methods.hpp"

#include <algorithm>
#include <chrono>

namespace anneal {

namespace {

RunRecord local_only(const Problem& problem, const LocalSearchSpec& spec, std::uint64_t seed,
                     const std::string& method) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  LocalSearchSpec s = spec;
  s.seed = substream_seed(seed, 1);
  const LocalResult r = local_search(s, problem, random_feasible(problem, rng));
  RunRecord rec;
  rec.problem = problem.name();
  rec.method = method;
  rec.seed = seed;
  rec.f_best = rec.f_final = r.f_star;
  rec.x_best = rec.x_final = r.x_star;
  rec.evaluations = r.evaluations;
  rec.outer_iterations = r.iterations;
  rec.stop_reason = r.converged ? StopReason::objective : StopReason::max_outer;
  rec.counters["reflections"] = r.reflections;
  rec.counters["shrinks"] = r.shrinks;
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {
      "sa",     "heating", "memory",   "anneal-local", "local-anneal",
      "hybrid", "sa-saes", "sa-sacep", "nelder-mead",  "sds"};
  return names;
}

bool is_method(const std::string& name) {
  const auto& names = method_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

EvoResult run_evolution(const std::string& method, const Problem& problem,
                        const MethodSettings& settings, std::uint64_t seed) {
  EvoConfig c = settings.evo;
  c.seed = seed;
  if (method == "sa-saes") return run_sa_saes(problem, c);
  if (method == "sa-sacep") return run_sa_sacep(problem, c);
  throw ConfigError("unknown evolutionary method \"" + method + "\"");
}

Solver make_solver(const std::string& method, const MethodSettings& settings) {
  if (!is_method(method)) throw ConfigError("unknown method \"" + method + "\"");
  return [method, settings](const Problem& problem, std::uint64_t seed) -> RunRecord {
    AnnealConfig sa = settings.sa;
    sa.seed = seed;
    if (method == "sa") return run_sa(problem, sa);
    if (method == "heating") return run_heating_annealing(problem, sa, settings.heat_factor);
    if (method == "memory") return run_memory_annealing(problem, sa);
    if (method == "anneal-local") return run_annealing_then_local(problem, sa, settings.local_search);
    if (method == "local-anneal") {
      return run_local_then_annealing(problem, sa, settings.local_search, settings.snun);
    }
    if (method == "hybrid") {
      HybridConfig h = settings.hybrid;
      h.seed = seed;
      return run_hybrid_ls_sa(problem, h);
    }
    if (method == "sa-saes" || method == "sa-sacep") {
      return run_evolution(method, problem, settings, seed).record;
    }
    if (method == "nelder-mead") {
      LocalSearchSpec s = settings.local_search;
      s.kind = std::holds_alternative<NelderMead>(s.kind) ? s.kind : LocalKind{NelderMead{}};
      return local_only(problem, s, seed, method);
    }
    LocalSearchSpec s = settings.local_search;
    if (std::holds_alternative<NelderMead>(s.kind)) s.kind = Sds{};
    return local_only(problem, s, seed, method);
  };
}

Json to_json(const MethodSettings& m) {
  return {{"sa", to_json(m.sa)},
          {"local_search", to_json(m.local_search)},
          {"hybrid", to_json(m.hybrid)},
          {"evo", to_json(m.evo)},
          {"heat_factor", m.heat_factor},
          {"snun", m.snun}};
}

MethodSettings method_settings_from_json(const Json& j, const MethodSettings& base) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  MethodSettings m = base;
  if (j.contains("sa")) m.sa = anneal_config_from_json(j.at("sa"), base.sa, "sa");
  if (j.contains("local_search")) {
    m.local_search = local_search_from_json(j.at("local_search"), base.local_search);
  }
  if (j.contains("hybrid")) m.hybrid = hybrid_from_json(j.at("hybrid"), base.hybrid);
  if (j.contains("evo")) m.evo = evo_from_json(j.at("evo"), base.evo);
  if (j.contains("heat_factor")) {
    if (!j.at("heat_factor").is_number()) throw ConfigError("heat_factor: expected a number");
    m.heat_factor = j.at("heat_factor").get<double>();
    require(m.heat_factor > 1.0, "heat_factor must be > 1");
  }
  if (j.contains("snun")) {
    if (!j.at("snun").is_number_integer()) throw ConfigError("snun: expected an integer");
    m.snun = j.at("snun").get<int>();
    require(m.snun >= 1, "snun must be >= 1");
  }
  return m;
}

}  // namespace anneal
