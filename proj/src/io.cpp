#include "anneal/io.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace anneal {

namespace {

// Tracks which keys of an object were read so the rest can be rejected.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const Json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    out = get<T>(key);
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    out = get<T>(key);
  }

  template <class T>
  T get(const std::string& key) {
    const Json& v = at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(where(key) + ": expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
      }
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where(key) + ": " + e.what());
    }
  }

  std::string kind() {
    if (!has("kind")) throw ConfigError(path_ + ": missing \"kind\"");
    return get<std::string>("kind");
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(path_ + ": unknown key \"" + key + "\"");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
  return arr;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number() && !j[i].is_null()) throw ConfigError(path + ": expected numbers");
    v[static_cast<Index>(i)] = number_from(j[i]);
  }
  return v;
}

Json to_json(const InitTempSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, KirkpatrickInit>) {
          return {{"kind", "kirkpatrick"}, {"chi0", s.chi0}, {"growth", s.growth},
                  {"samples", s.samples}};
        } else if constexpr (std::is_same_v<S, JohnsonInit>) {
          return {{"kind", "johnson"}, {"chi0", s.chi0}, {"samples", s.samples}};
        } else if constexpr (std::is_same_v<S, AartsInit>) {
          return {{"kind", "aarts"}, {"chi", s.chi}, {"samples", s.samples}};
        } else if constexpr (std::is_same_v<S, VarianceInit>) {
          return {{"kind", "variance"}, {"samples", s.samples}};
        } else {
          return {{"kind", "maxdiff"}, {"p_r", s.p_r}, {"samples", s.samples}};
        }
      },
      spec);
}

InitTempSpec init_temp_from_json(const Json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.kind();
  InitTempSpec out;
  if (kind == "kirkpatrick") {
    KirkpatrickInit s;
    r.read("chi0", s.chi0);
    r.read("growth", s.growth);
    r.read("samples", s.samples);
    out = s;
  } else if (kind == "johnson") {
    JohnsonInit s;
    r.read("chi0", s.chi0);
    r.read("samples", s.samples);
    out = s;
  } else if (kind == "aarts") {
    AartsInit s;
    r.read("chi", s.chi);
    r.read("samples", s.samples);
    out = s;
  } else if (kind == "variance") {
    VarianceInit s;
    r.read("samples", s.samples);
    out = s;
  } else if (kind == "maxdiff") {
    MaxDiffInit s;
    r.read("p_r", s.p_r);
    r.read("samples", s.samples);
    out = s;
  } else {
    throw ConfigError(path + ": unknown kind \"" + kind + "\"");
  }
  r.finish();
  validate(out);
  return out;
}

Json to_json(const CoolingLaw& law) {
  return std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Geometric>) {
          return {{"kind", "geometric"}, {"alpha", s.alpha}};
        } else if constexpr (std::is_same_v<S, LundyMees>) {
          return {{"kind", "lundy_mees"}, {"beta", s.beta}};
        } else if constexpr (std::is_same_v<S, AartsLaarhoven>) {
          return {{"kind", "aarts_laarhoven"}, {"epsilon", s.epsilon}};
        } else if constexpr (std::is_same_v<S, Boltzmann>) {
          return {{"kind", "boltzmann"}, {"c", s.c}};
        } else if constexpr (std::is_same_v<S, FastSchedule>) {
          return {{"kind", "fast"}};
        } else if constexpr (std::is_same_v<S, Vfsr>) {
          return {{"kind", "vfsr"}, {"c", s.c_scale}, {"n", s.n}};
        } else if constexpr (std::is_same_v<S, PowerSchedule>) {
          return {{"kind", "power"}, {"n", s.n}};
        } else {
          return {{"kind", "huang"}};
        }
      },
      law);
}

CoolingLaw cooling_from_json(const Json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.kind();
  CoolingLaw out;
  if (kind == "geometric") {
    Geometric s;
    r.read("alpha", s.alpha);
    out = s;
  } else if (kind == "lundy_mees") {
    LundyMees s;
    r.read("beta", s.beta);
    out = s;
  } else if (kind == "aarts_laarhoven") {
    AartsLaarhoven s;
    r.read("epsilon", s.epsilon);
    out = s;
  } else if (kind == "boltzmann") {
    Boltzmann s;
    r.read("c", s.c);
    out = s;
  } else if (kind == "fast") {
    out = FastSchedule{};
  } else if (kind == "vfsr") {
    Vfsr s;
    r.read("c", s.c_scale);
    r.read("n", s.n);
    out = s;
  } else if (kind == "power") {
    PowerSchedule s;
    r.read("n", s.n);
    out = s;
  } else if (kind == "huang") {
    out = Huang{};
  } else {
    throw ConfigError(path + ": unknown kind \"" + kind + "\"");
  }
  r.finish();
  validate(ScheduleSpec{out, 1.0, std::nullopt});
  return out;
}

Json to_json(const MoveSpec& move) {
  return std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SingleCoordinate>) {
          return {{"kind", "single_coordinate"}};
        } else if constexpr (std::is_same_v<S, RandomSubset>) {
          return {{"kind", "random_subset"}};
        } else if constexpr (std::is_same_v<S, SimplexMove>) {
          return {{"kind", "simplex"}};
        } else if constexpr (std::is_same_v<S, StepDirection>) {
          return {{"kind", "step_direction"}, {"q0", s.q0}, {"target_acc", s.target_acc},
                  {"window", s.window}};
        } else if constexpr (std::is_same_v<S, Corana>) {
          return {{"kind", "corana"}, {"v", to_json(s.v)}};
        } else if constexpr (std::is_same_v<S, Gaussian>) {
          return {{"kind", "gaussian"}, {"scale", s.scale}};
        } else {
          return {{"kind", "cauchy"}, {"scale", s.scale}};
        }
      },
      move);
}

MoveSpec move_from_json(const Json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.kind();
  MoveSpec out;
  if (kind == "single_coordinate") {
    out = SingleCoordinate{};
  } else if (kind == "random_subset") {
    out = RandomSubset{};
  } else if (kind == "simplex") {
    out = SimplexMove{};
  } else if (kind == "step_direction") {
    StepDirection s;
    r.read("q0", s.q0);
    r.read("target_acc", s.target_acc);
    r.read("window", s.window);
    out = s;
  } else if (kind == "corana") {
    Corana s;
    if (r.has("v")) {
      const Json& v = r.at("v");
      s.v = v.is_number() ? Vector::Constant(1, v.get<double>()) : vector_from_json(v, r.where("v"));
    }
    out = s;
  } else if (kind == "gaussian") {
    Gaussian s;
    r.read("scale", s.scale);
    out = s;
  } else if (kind == "cauchy") {
    Cauchy s;
    r.read("scale", s.scale);
    out = s;
  } else {
    throw ConfigError(path + ": unknown kind \"" + kind + "\"");
  }
  r.finish();
  validate(out);
  return out;
}

Json to_json(const AcceptanceSpec& spec) {
  Json j = std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Metropolis>) {
          return {{"kind", "metropolis"}};
        } else if constexpr (std::is_same_v<S, Generalized>) {
          return {{"kind", "generalized"}, {"power", s.power}, {"scale", s.scale}};
        } else if constexpr (std::is_same_v<S, Barker>) {
          return {{"kind", "barker"}};
        } else {
          return {{"kind", "johnson_linear"}};
        }
      },
      spec.rule);
  j["lookup_table"] = spec.lookup_table;
  return j;
}

AcceptanceSpec acceptance_from_json(const Json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.kind();
  AcceptanceSpec out;
  if (kind == "metropolis") {
    out.rule = Metropolis{};
  } else if (kind == "generalized") {
    Generalized g;
    r.read("power", g.power);
    r.read("scale", g.scale);
    out.rule = g;
  } else if (kind == "barker") {
    out.rule = Barker{};
  } else if (kind == "johnson_linear") {
    out.rule = JohnsonLinear{};
  } else {
    throw ConfigError(path + ": unknown kind \"" + kind + "\"");
  }
  r.read("lookup_table", out.lookup_table);
  r.finish();
  validate(out);
  return out;
}

Json to_json(const AnnealConfig& c) {
  Json j;
  j["init_temp"] = to_json(c.init_temp);
  j["t0"] = optional_json(c.t0);
  j["cooling"] = to_json(c.cooling);
  j["move"] = to_json(c.move);
  j["acceptance"] = to_json(c.acceptance);
  j["delta"] = c.delta_threshold;
  j["n_size"] = optional_json(c.n_size);
  j["n_size_per_dim"] = c.n_size_per_dim;
  j["n_factor"] = c.n_factor;
  j["cut"] = c.cut;
  j["frozen_limit"] = c.frozen_limit;
  j["t_final"] = optional_json(c.t_final);
  j["epsilon"] = optional_json(c.objective_tolerance);
  j["stable_window"] = optional_json(c.stable_window);
  j["chi_final"] = optional_json(c.chi_final);
  j["p_floor"] = optional_json(c.p_floor);
  j["max_evaluations"] = c.max_evaluations;
  j["max_outer"] = optional_json(c.max_outer);
  j["max_seconds"] = optional_json(c.max_seconds);
  j["chain_cap"] = optional_json(c.chain_cap);
  j["seed"] = c.seed;
  j["x0"] = c.x0 ? to_json(*c.x0) : Json(nullptr);
  j["record_trace"] = c.record_trace;
  return j;
}

AnnealConfig anneal_config_from_json(const Json& j, const AnnealConfig& base,
                                     const std::string& path) {
  Reader r(j, path);
  AnnealConfig c = base;
  if (r.has("init_temp")) c.init_temp = init_temp_from_json(r.at("init_temp"), r.where("init_temp"));
  r.read("t0", c.t0);
  if (r.has("cooling")) c.cooling = cooling_from_json(r.at("cooling"), r.where("cooling"));
  if (r.has("move")) c.move = move_from_json(r.at("move"), r.where("move"));
  if (r.has("acceptance")) {
    c.acceptance = acceptance_from_json(r.at("acceptance"), r.where("acceptance"));
  }
  r.read("delta", c.delta_threshold);
  r.read("n_size", c.n_size);
  r.read("n_size_per_dim", c.n_size_per_dim);
  r.read("n_factor", c.n_factor);
  r.read("cut", c.cut);
  r.read("frozen_limit", c.frozen_limit);
  r.read("t_final", c.t_final);
  r.read("epsilon", c.objective_tolerance);
  r.read("stable_window", c.stable_window);
  r.read("chi_final", c.chi_final);
  r.read("p_floor", c.p_floor);
  r.read("max_evaluations", c.max_evaluations);
  r.read("max_outer", c.max_outer);
  r.read("max_seconds", c.max_seconds);
  r.read("chain_cap", c.chain_cap);
  r.read("seed", c.seed);
  if (r.has("x0")) {
    c.x0 = vector_from_json(r.at("x0"), r.where("x0"));
  } else if (j.contains("x0")) {
    c.x0.reset();
  }
  r.read("record_trace", c.record_trace);
  r.finish();
  validate(c);
  return c;
}

Json to_json(const LocalSearchSpec& s) {
  Json j = std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, NelderMead>) {
          return {{"kind", "nelder_mead"}, {"reflect", k.reflect}, {"expand", k.expand},
                  {"contract", k.contract}, {"shrink", k.shrink}};
        } else if constexpr (std::is_same_v<K, Sds>) {
          return {{"kind", "sds"}, {"n_worst", k.n_worst}};
        } else {
          return {{"kind", "sds_thermal"}, {"n_worst", k.n_worst}, {"k_b", k.k_b},
                  {"temperature", k.temperature}};
        }
      },
      s.kind);
  j["tol"] = s.tol;
  j["x_tol"] = s.x_tol;
  j["max_iterations"] = s.max_iterations;
  j["initial_simplex_scale"] = s.initial_simplex_scale;
  j["restarts"] = s.restarts;
  j["seed"] = s.seed;
  return j;
}

LocalSearchSpec local_search_from_json(const Json& j, const LocalSearchSpec& base,
                                       const std::string& path) {
  Reader r(j, path);
  LocalSearchSpec s = base;
  if (r.has("kind")) {
    const std::string kind = r.get<std::string>("kind");
    if (kind == "nelder_mead") {
      NelderMead k = std::holds_alternative<NelderMead>(base.kind) ? std::get<NelderMead>(base.kind)
                                                                   : NelderMead{};
      r.read("reflect", k.reflect);
      r.read("expand", k.expand);
      r.read("contract", k.contract);
      r.read("shrink", k.shrink);
      s.kind = k;
    } else if (kind == "sds") {
      Sds k;
      r.read("n_worst", k.n_worst);
      s.kind = k;
    } else if (kind == "sds_thermal") {
      SdsThermal k;
      r.read("n_worst", k.n_worst);
      r.read("k_b", k.k_b);
      r.read("temperature", k.temperature);
      s.kind = k;
    } else {
      throw ConfigError(path + ": unknown kind \"" + kind + "\"");
    }
  }
  r.read("tol", s.tol);
  r.read("x_tol", s.x_tol);
  r.read("max_iterations", s.max_iterations);
  r.read("initial_simplex_scale", s.initial_simplex_scale);
  r.read("restarts", s.restarts);
  r.read("seed", s.seed);
  r.finish();
  validate(s);
  return s;
}

Json to_json(const HybridConfig& c) {
  return {{"sa", to_json(c.sa)},
          {"local_search", to_json(c.ls)},
          {"improvement_threshold", c.improvement_threshold},
          {"max_rounds", c.max_rounds},
          {"max_evaluations", c.max_evaluations},
          {"seed", c.seed},
          {"record_trace", c.record_trace}};
}

HybridConfig hybrid_from_json(const Json& j, const HybridConfig& base, const std::string& path) {
  Reader r(j, path);
  HybridConfig c = base;
  if (r.has("sa")) c.sa = anneal_config_from_json(r.at("sa"), base.sa, r.where("sa"));
  if (r.has("local_search")) {
    c.ls = local_search_from_json(r.at("local_search"), base.ls, r.where("local_search"));
  }
  r.read("improvement_threshold", c.improvement_threshold);
  r.read("max_rounds", c.max_rounds);
  r.read("max_evaluations", c.max_evaluations);
  r.read("seed", c.seed);
  r.read("record_trace", c.record_trace);
  r.finish();
  validate(c);
  return c;
}

Json to_json(const EvoConfig& c) {
  return {{"mu", c.mu},
          {"lambda", c.lambda},
          {"zeta", c.zeta},
          {"tau", optional_json(c.tau)},
          {"tau_prime", optional_json(c.tau_prime)},
          {"sigma0", c.sigma0},
          {"sa_budget", c.sa_budget ? to_json(*c.sa_budget) : Json(0)},
          {"generations", c.generations},
          {"max_evaluations", c.max_evaluations},
          {"objective_tolerance", optional_json(c.objective_tolerance)},
          {"sa_parents_once", c.sa_parents_once},
          {"seed", c.seed},
          {"record_population", c.record_population}};
}

EvoConfig evo_from_json(const Json& j, const EvoConfig& base, const std::string& path) {
  Reader r(j, path);
  EvoConfig c = base;
  r.read("mu", c.mu);
  r.read("lambda", c.lambda);
  r.read("zeta", c.zeta);
  r.read("tau", c.tau);
  r.read("tau_prime", c.tau_prime);
  r.read("sigma0", c.sigma0);
  if (j.contains("sa_budget")) {
    const Json& sa = r.at("sa_budget");
    if (sa.is_null() || (sa.is_number() && sa.get<double>() == 0.0)) {
      c.sa_budget.reset();
    } else {
      const AnnealConfig start = base.sa_budget ? *base.sa_budget : default_embedded_sa();
      c.sa_budget = anneal_config_from_json(sa, start, r.where("sa_budget"));
    }
  }
  r.read("generations", c.generations);
  r.read("max_evaluations", c.max_evaluations);
  r.read("objective_tolerance", c.objective_tolerance);
  r.read("sa_parents_once", c.sa_parents_once);
  r.read("seed", c.seed);
  r.read("record_population", c.record_population);
  r.finish();
  return c;
}

Json to_json(const RunRecord& rec) {
  Json j;
  j["problem"] = rec.problem;
  j["dim"] = rec.x_best.size();
  j["method"] = rec.method;
  j["seed"] = rec.seed;
  j["f_best"] = number(rec.f_best);
  j["x_best"] = to_json(rec.x_best);
  j["f_final"] = number(rec.f_final);
  j["x_final"] = to_json(rec.x_final);
  j["evaluations"] = rec.evaluations;
  j["outer_iterations"] = rec.outer_iterations;
  j["t0"] = number(rec.t0);
  j["wall_seconds"] = rec.wall_seconds;
  j["stop_reason"] = std::string(to_string(rec.stop_reason));
  j["counters"] = rec.counters;
  Json phases = Json::array();
  for (const auto& p : rec.phases) {
    phases.push_back({{"index", p.index}, {"phase", p.phase}, {"f_best", number(p.f_best)},
                      {"evaluations", p.evaluations}});
  }
  j["phases"] = phases;
  if (!rec.trace.empty()) {
    Json trace = Json::array();
    for (const auto& t : rec.trace) {
      trace.push_back({{"k", t.k},
                       {"T", number(t.t)},
                       {"iteration_count", t.iteration_count},
                       {"renew", t.renew},
                       {"f", number(t.f)},
                       {"f_best", number(t.f_best)},
                       {"acc_rate", t.acc_rate}});
    }
    j["trace"] = trace;
  }
  return j;
}

RunRecord run_record_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("record: expected an object");
  try {
    RunRecord rec;
    rec.problem = j.at("problem").get<std::string>();
    rec.method = j.at("method").get<std::string>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.f_best = number_from(j.at("f_best"));
    rec.x_best = vector_from_json(j.at("x_best"), "record.x_best");
    rec.f_final = number_from(j.value("f_final", Json(nullptr)));
    if (j.contains("x_final")) rec.x_final = vector_from_json(j.at("x_final"), "record.x_final");
    rec.evaluations = j.at("evaluations").get<long long>();
    rec.outer_iterations = j.value("outer_iterations", 0LL);
    rec.t0 = number_from(j.value("t0", Json(nullptr)));
    rec.wall_seconds = j.value("wall_seconds", 0.0);
    const auto reason = parse_stop_reason(j.at("stop_reason").get<std::string>());
    if (!reason) throw ConfigError("record: unknown stop_reason");
    rec.stop_reason = *reason;
    if (j.contains("counters")) rec.counters = j.at("counters").get<std::map<std::string, long long>>();
    if (j.contains("phases")) {
      for (const auto& p : j.at("phases")) {
        rec.phases.push_back({p.at("index").get<long long>(), p.at("phase").get<std::string>(),
                              number_from(p.at("f_best")), p.at("evaluations").get<long long>()});
      }
    }
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("record: ") + e.what());
  }
}

Json to_json(const Trial& t) {
  return {{"problem", t.problem}, {"dim", t.dim},       {"solver", t.solver},
          {"rep", t.rep},         {"seed", t.seed},     {"failed", t.failed},
          {"error", t.error},     {"record", t.failed ? Json(nullptr) : to_json(t.record)}};
}

Trial trial_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("trial: expected an object");
  try {
    Trial t;
    t.problem = j.at("problem").get<std::string>();
    t.dim = j.at("dim").get<Index>();
    t.solver = j.at("solver").get<std::string>();
    t.rep = j.at("rep").get<int>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.failed = j.at("failed").get<bool>();
    t.error = j.value("error", std::string());
    if (!t.failed) t.record = run_record_from_json(j.at("record"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("trial: ") + e.what());
  }
}

}  // namespace anneal
