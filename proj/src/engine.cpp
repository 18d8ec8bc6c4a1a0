#include "anneal/engine.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <sstream>

#include "anneal/local_search.hpp"

namespace anneal {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::array<std::string_view, 8> kStopNames = {
    "final_temperature", "frozen",     "acceptance_rate", "objective",
    "acceptance_probability", "max_evaluations", "max_outer", "max_seconds"};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Restores an evaluator's budget when a phase ends.
class BudgetScope {
 public:
  BudgetScope(Evaluator& eval, long long limit) : eval_(eval), saved_(eval.budget()) {
    eval_.set_budget(std::min(saved_, limit));
  }
  ~BudgetScope() { eval_.set_budget(saved_); }
  BudgetScope(const BudgetScope&) = delete;
  BudgetScope& operator=(const BudgetScope&) = delete;

 private:
  Evaluator& eval_;
  long long saved_;
};

long long saturating_add(long long a, long long b) {
  if (b > std::numeric_limits<long long>::max() - a) return std::numeric_limits<long long>::max();
  return a + b;
}

void fill_counters(RunRecord& rec, const AnnealState& st) {
  rec.counters["fast_path_accepts"] += st.fast_path_accepts;
  rec.counters["strict_improvements"] += st.strict_improvements;
  rec.counters["uphill_accepts"] += st.uphill_accepts;
  rec.counters["downhill_proposals"] += st.downhill_proposals;
  rec.counters["downhill_accepts"] += st.downhill_accepts;
  rec.counters["heat_count"] += st.heat_count;
  rec.counters["best_count"] += st.best_count;
}

RunRecord anneal_impl(const Problem& problem, const AnnealConfig& config, Evaluator& eval,
                      Rng& rng, std::optional<double> t0_override, HeatOptions* heat) {
  validate(config);
  const auto start = Clock::now();
  const long long start_count = eval.count();
  if (eval.remaining() < 1 || config.max_evaluations < 1) {
    throw ConfigError("anneal: no evaluations available");
  }
  BudgetScope scope(eval, saturating_add(start_count, config.max_evaluations));

  // The stop rules see this phase's evaluations against this phase's limit.
  AnnealConfig cfg = config;
  cfg.max_evaluations = eval.budget() - start_count;

  RunRecord rec;
  rec.problem = problem.name();
  rec.method = "sa";
  rec.seed = config.seed;

  Vector x = config.x0 ? *config.x0 : random_feasible(problem, rng);
  if (x.size() != problem.dim() || !contains(problem, x)) {
    throw ConfigError("anneal: starting point is not feasible");
  }
  const double f = eval(x);

  std::optional<StopReason> reason;
  double t0 = kTemperatureFloor;
  try {
    if (t0_override) {
      t0 = *t0_override;
    } else if (config.t0) {
      t0 = *config.t0;
    } else {
      t0 = init_temp(config.init_temp, eval, rng, config.move);
    }
  } catch (const BudgetExhausted&) {
    reason = StopReason::max_evaluations;
  }
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw SearchError("anneal: initial temperature invalid");
  rec.t0 = t0;

  const ScheduleSpec schedule{config.cooling, t0, std::nullopt};
  const long long n_size = effective_n_size(config, problem.dim());
  const std::optional<double> f_opt = problem.known_optimum();

  AnnealState st = initial_state(x, f, t0, config.move);
  st.evaluations = eval.count() - start_count;

  // While heating, the temperature is meant to be low; T_f cannot stop it.
  auto outer_check = [&]() -> std::optional<StopReason> {
    if (heat && heat->active && cfg.t_final) {
      AnnealConfig relaxed = cfg;
      relaxed.t_final.reset();
      return stop_outer(st, relaxed, f_opt);
    }
    return stop_outer(st, cfg, f_opt);
  };
  if (!reason) reason = outer_check();

  while (!reason) {
    const long long best_before = st.best_count;
    const double t_used = st.t;
    const InnerResult inner = inner_loop(st, eval, cfg, rng, heat);
    ++st.k;

    double t_next = st.t;
    double t_uncapped = st.t;
    if (!inner.heated) {
      std::optional<CoolingStats> stats;
      bool skip = false;
      if (needs_stats(config.cooling)) {
        if (st.acc_stats.f_sigma > 0.0) {
          stats = CoolingStats{st.acc_stats.f_sigma, st.acc_stats.f_mean,
                               st.acc_stats.previous_mean};
        } else {
          skip = true;
        }
      }
      if (!skip) {
        t_next = cool(schedule, st.t, st.k, stats);
        t_uncapped = std::holds_alternative<Huang>(config.cooling)
                         ? huang_uncapped(st.t, *stats)
                         : t_next;
      }
    }

    if (st.best_count > best_before) {
      st.frozen_count = 0;
      st.outer_index = 0;
    } else {
      ++st.outer_index;
    }
    if (st.iteration_count > 0 &&
        static_cast<double>(st.renew) / static_cast<double>(st.iteration_count) <
            1.0 / static_cast<double>(n_size)) {
      ++st.frozen_count;
    }

    if (config.record_trace) {
      TraceRow row;
      row.k = st.k - 1;
      row.t = t_used;
      row.iteration_count = st.iteration_count;
      row.renew = st.renew;
      row.accepted = st.acc_stats.accepted;
      row.f = st.f;
      row.f_best = st.f_best;
      row.acc_rate = st.acc_stats.rate();
      row.inner_index = st.inner_index;
      row.outer_index = st.outer_index;
      row.t_uncapped = t_uncapped;
      row.heated = inner.heated;
      rec.trace.push_back(row);
    }

    st.t = std::max(t_next, kTemperatureFloor);
    st.evaluations = eval.count() - start_count;
    st.elapsed_seconds = seconds_since(start);
    reason = outer_check();
  }

  rec.stop_reason = *reason;
  rec.f_best = st.f_best;
  rec.x_best = st.x_best;
  rec.f_final = st.f;
  rec.x_final = st.x;
  rec.evaluations = eval.count() - start_count;
  rec.outer_iterations = st.k;
  rec.wall_seconds = seconds_since(start);
  fill_counters(rec, st);
  return rec;
}

}  // namespace

std::string_view to_string(StopReason reason) {
  return kStopNames[static_cast<std::size_t>(reason)];
}

std::optional<StopReason> parse_stop_reason(std::string_view name) {
  for (std::size_t i = 0; i < kStopNames.size(); ++i) {
    if (kStopNames[i] == name) return static_cast<StopReason>(i);
  }
  return std::nullopt;
}

std::string_view to_string(InnerStop cause) {
  switch (cause) {
    case InnerStop::iterations: return "iterations";
    case InnerStop::chain_cap: return "chain_cap";
    case InnerStop::renew_cap: return "renew_cap";
    case InnerStop::stable_mean: return "stable_mean";
    case InnerStop::budget: return "budget";
    default: return "none";
  }
}

void validate(const AnnealConfig& c) {
  if (c.t0) require(*c.t0 > 0.0 && std::isfinite(*c.t0), "sa: T0 must be positive");
  if (!c.t0) validate(c.init_temp);
  validate(ScheduleSpec{c.cooling, 1.0, std::nullopt});
  validate(c.move);
  validate(c.acceptance);
  require(c.delta_threshold >= 0.0, "sa: delta must be >= 0");
  if (c.n_size) require(*c.n_size >= 1, "sa: n_size must be >= 1");
  require(c.n_size_per_dim >= 1, "sa: n_size_per_dim must be >= 1");
  require(c.n_factor >= 1, "sa: n_factor must be >= 1");
  require(c.cut > 0.0, "sa: cut must be > 0");
  require(c.frozen_limit >= 1, "sa: frozen_limit must be >= 1");
  if (c.t_final) require(*c.t_final > 0.0, "sa: T_f must be > 0");
  if (c.objective_tolerance) require(*c.objective_tolerance >= 0.0, "sa: epsilon must be >= 0");
  if (c.stable_window) {
    require(*c.stable_window >= 2, "sa: stable_window must be >= 2");
    require(c.objective_tolerance.has_value(), "sa: stable_window needs objective_tolerance");
  }
  if (c.chi_final) require(*c.chi_final >= 0.0 && *c.chi_final < 1.0, "sa: chi_f must be in [0, 1)");
  if (c.p_floor) require(*c.p_floor >= 0.0 && *c.p_floor < 1.0, "sa: P_F must be in [0, 1)");
  require(c.max_evaluations >= 0, "sa: max_evaluations must be >= 0");
  if (c.max_outer) require(*c.max_outer >= 1, "sa: max_outer must be >= 1");
  if (c.max_seconds) require(*c.max_seconds > 0.0, "sa: max_seconds must be > 0");
  if (c.chain_cap) require(*c.chain_cap >= 1, "sa: chain_cap must be >= 1");
}

long long effective_n_size(const AnnealConfig& config, Index n) {
  return config.n_size ? *config.n_size : config.n_size_per_dim * static_cast<long long>(n);
}

AnnealState initial_state(const Vector& x, double f, double t, const MoveSpec& move) {
  AnnealState st;
  st.x = x;
  st.f = f;
  st.t = t;
  st.x_best = x;
  st.f_best = f;
  st.move_state = initial_move_state(move);
  return st;
}

std::optional<InnerStop> stop_inner(const AnnealState& st, const AnnealConfig& config,
                                    Index n) {
  const long long base = config.n_factor * effective_n_size(config, n);
  if (st.iteration_count >= base) return InnerStop::iterations;
  if (config.chain_cap && st.iteration_count >= *config.chain_cap) return InnerStop::chain_cap;
  if (static_cast<double>(st.renew) >= config.cut * static_cast<double>(base)) {
    return InnerStop::renew_cap;
  }
  if (config.stable_window && config.objective_tolerance) {
    const auto w = static_cast<std::size_t>(*config.stable_window);
    if (st.f_window.size() >= w) {
      // Compare the means of the older and newer halves of the window.
      const std::size_t half = w / 2;
      const std::size_t end = st.f_window.size();
      double older = 0.0;
      double newer = 0.0;
      for (std::size_t i = 0; i < half; ++i) {
        older += st.f_window[end - w + i];
        newer += st.f_window[end - half + i];
      }
      if (std::abs(newer - older) / static_cast<double>(half) < *config.objective_tolerance) {
        return InnerStop::stable_mean;
      }
    }
  }
  return std::nullopt;
}

std::optional<StopReason> stop_outer(const AnnealState& st, const AnnealConfig& c,
                                     std::optional<double> f_opt) {
  if (st.t <= kTemperatureFloor || (c.t_final && st.t <= *c.t_final)) {
    return StopReason::final_temperature;
  }
  if (st.frozen_count >= c.frozen_limit) return StopReason::frozen;
  const bool sampled = st.acc_stats.proposed > 0;
  if (c.chi_final && sampled && st.acc_stats.rate() <= *c.chi_final) {
    return StopReason::acceptance_rate;
  }
  if (c.objective_tolerance) {
    const double eps = *c.objective_tolerance;
    if (std::abs(st.last_delta) <= eps && st.f - st.f_best <= eps) return StopReason::objective;
    if (f_opt && (st.f_best - *f_opt) / std::max(std::abs(*f_opt), 1.0) <= eps) {
      return StopReason::objective;
    }
  }
  if (c.p_floor && sampled && st.acc_stats.mean_accept_probability <= *c.p_floor) {
    return StopReason::acceptance_probability;
  }
  if (st.evaluations >= c.max_evaluations) return StopReason::max_evaluations;
  if (c.max_outer && st.k >= *c.max_outer) return StopReason::max_outer;
  if (c.max_seconds && st.elapsed_seconds >= *c.max_seconds) return StopReason::max_seconds;
  return std::nullopt;
}

InnerResult inner_loop(AnnealState& st, Evaluator& eval, const AnnealConfig& config, Rng& rng,
                       HeatOptions* heat) {
  if (!(st.t > 0.0)) throw ConfigError("inner_loop: temperature must be positive");
  const Problem& problem = eval.problem();
  const Index n = problem.dim();
  const bool incremental = problem.incremental().has_value();

  if (st.acc_stats.proposed > 0) st.acc_stats.previous_mean = st.acc_stats.f_mean;
  st.iteration_count = 0;
  st.renew = 0;
  st.inner_index = 0;
  st.f_window.clear();

  InnerResult out;
  long long accepted = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double prob_sum = 0.0;

  while (true) {
    if (auto cause = stop_inner(st, config, n)) {
      out.cause = *cause;
      break;
    }
    if (eval.exhausted()) {
      out.cause = InnerStop::budget;
      break;
    }
    Vector y = propose(config.move, st.move_state, st.x, problem, rng);
    double fy;
    double d;
    if (incremental) {
      d = eval.delta(st.x, y, st.f);
      fy = st.f + d;
    } else {
      fy = eval(y);
      d = fy - st.f;
    }
    ++st.iteration_count;
    const double dm = fy - mean;
    mean += dm / static_cast<double>(st.iteration_count);
    m2 += dm * (fy - mean);

    bool accept = false;
    double prob = 1.0;
    if (d < 0.0) ++st.downhill_proposals;
    if (d < -config.delta_threshold) {
      accept = true;
      ++st.fast_path_accepts;
      ++st.strict_improvements;
    } else if (heat && heat->active && d > 0.0) {
      accept = true;
      st.t = std::min(st.t * heat->factor, heat->ceiling);
      if (st.t >= heat->ceiling) heat->active = false;
      out.heated = true;
      ++st.heat_count;
    } else {
      if (config.p_floor) prob = accept_probability(config.acceptance, d, st.t);
      accept = decide(config.acceptance, d, st.t, rng);
    }
    prob_sum += prob;

    if (fy < st.f_best) {
      st.x_best = y;
      st.f_best = fy;
      ++st.best_count;
      st.inner_index = 0;
    } else {
      ++st.inner_index;
    }
    if (accept) {
      st.x = std::move(y);
      st.f = fy;
      ++st.renew;
      ++accepted;
      if (d > 0.0) ++st.uphill_accepts;
      if (d < 0.0) ++st.downhill_accepts;
    }
    record_outcome(config.move, st.move_state, accept);
    st.last_delta = d;

    if (config.stable_window) {
      st.f_window.push_back(st.f);
      if (st.f_window.size() > static_cast<std::size_t>(*config.stable_window)) {
        st.f_window.pop_front();
      }
    }
  }

  st.acc_stats.accepted = accepted;
  st.acc_stats.proposed = st.iteration_count;
  st.acc_stats.f_mean = mean;
  st.acc_stats.f_sigma =
      st.iteration_count > 1 ? std::sqrt(m2 / static_cast<double>(st.iteration_count - 1)) : 0.0;
  st.acc_stats.mean_accept_probability =
      st.iteration_count > 0 ? prob_sum / static_cast<double>(st.iteration_count) : 1.0;
  return out;
}

RunRecord anneal(const Problem& problem, const AnnealConfig& config, Evaluator& eval, Rng& rng,
                 std::optional<double> t0_override) {
  return anneal_impl(problem, config, eval, rng, t0_override, nullptr);
}

RunRecord run_sa(const Problem& problem, const AnnealConfig& config) {
  Rng rng(config.seed);
  Evaluator eval(problem, config.max_evaluations);
  return anneal(problem, config, eval, rng);
}

RunRecord run_heating_annealing(const Problem& problem, const AnnealConfig& config,
                                double heat_factor) {
  require(heat_factor > 1.0, "heating: heat_factor must be > 1");
  validate(config);
  const auto start = Clock::now();
  Rng rng(config.seed);
  Evaluator eval(problem, config.max_evaluations);
  double ceiling = 0.0;
  if (config.t0) {
    ceiling = *config.t0;
  } else {
    const int samples = std::visit([](const auto& s) { return s.samples; }, config.init_temp);
    ceiling = init_temp(VarianceInit{samples}, eval, rng, config.move);
  }
  HeatOptions heat{heat_factor, ceiling, true};
  AnnealConfig cfg = config;
  cfg.max_evaluations = eval.remaining();
  if (cfg.max_evaluations < 1) throw ConfigError("heating: budget spent on the variance estimate");
  RunRecord rec = anneal_impl(problem, cfg, eval, rng, 1e-6 * ceiling, &heat);
  rec.method = "heating";
  rec.evaluations = eval.count();
  rec.wall_seconds = seconds_since(start);
  return rec;
}

RunRecord run_memory_annealing(const Problem& problem, const AnnealConfig& config) {
  RunRecord rec = run_sa(problem, config);
  rec.method = "memory";
  rec.x_final = rec.x_best;
  rec.f_final = rec.f_best;
  return rec;
}

RunRecord run_annealing_then_local(const Problem& problem, const AnnealConfig& config,
                                   const LocalSearchSpec& ls) {
  validate(ls);
  const auto start = Clock::now();
  Rng rng(config.seed);
  RunRecord rec;
  Vector from;
  long long sa_evals = 0;
  if (config.max_evaluations > 0) {
    Evaluator eval(problem, config.max_evaluations);
    rec = anneal(problem, config, eval, rng);
    sa_evals = rec.evaluations;
    from = rec.x_best;
    rec.phases.push_back({0, "anneal", rec.f_best, rec.evaluations});
  } else {
    validate(config);
    from = config.x0 ? *config.x0 : random_feasible(problem, rng);
    rec.problem = problem.name();
    rec.seed = config.seed;
    rec.f_best = std::numeric_limits<double>::infinity();
    rec.stop_reason = StopReason::max_evaluations;
  }
  const LocalResult local = local_search(ls, problem, from);
  if (local.f_star < rec.f_best) {
    rec.f_best = local.f_star;
    rec.x_best = local.x_star;
  }
  rec.x_final = rec.x_best;
  rec.f_final = rec.f_best;
  rec.evaluations = sa_evals + local.evaluations;
  rec.phases.push_back({1, "local", rec.f_best, local.evaluations});
  rec.method = "anneal-local";
  rec.wall_seconds = seconds_since(start);
  return rec;
}

RunRecord run_local_then_annealing(const Problem& problem, const AnnealConfig& config,
                                   const LocalSearchSpec& ls, int snun) {
  require(snun >= 1, "local-anneal: snun must be >= 1");
  validate(config);
  validate(ls);
  const auto start = Clock::now();
  Rng rng(config.seed);
  Evaluator eval(problem);

  RunRecord rec;
  rec.problem = problem.name();
  rec.method = "local-anneal";
  rec.seed = config.seed;
  Vector x = config.x0 ? *config.x0 : random_feasible(problem, rng);
  rec.x_best = x;
  rec.f_best = eval(x);
  std::optional<double> t0;
  const long long phase_budget = config.max_evaluations / snun;

  for (int m = 0; m < snun; ++m) {
    LocalSearchSpec local_spec = ls;
    local_spec.seed = substream_seed(config.seed, 1, static_cast<std::uint64_t>(m));
    const LocalResult local = local_search(local_spec, eval, rec.x_best);
    if (local.f_star < rec.f_best) {
      rec.f_best = local.f_star;
      rec.x_best = local.x_star;
    }
    rec.phases.push_back({2 * m, "local", rec.f_best, eval.count()});
    if (phase_budget < 1) continue;

    AnnealConfig phase = config;
    phase.x0 = local.x_star;
    phase.max_evaluations = phase_budget;
    const RunRecord sa = anneal(problem, phase, eval, rng, t0);
    t0 = sa.t0;
    rec.outer_iterations += sa.outer_iterations;
    rec.stop_reason = sa.stop_reason;
    for (const auto& [key, value] : sa.counters) rec.counters[key] += value;
    if (config.record_trace) rec.trace.insert(rec.trace.end(), sa.trace.begin(), sa.trace.end());
    if (sa.f_best < rec.f_best) {
      rec.f_best = sa.f_best;
      rec.x_best = sa.x_best;
    }
    rec.phases.push_back({2 * m + 1, "anneal", rec.f_best, eval.count()});
  }
  rec.x_final = rec.x_best;
  rec.f_final = rec.f_best;
  rec.evaluations = eval.count();
  rec.t0 = t0.value_or(0.0);
  rec.wall_seconds = seconds_since(start);
  return rec;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "k,T,iteration_count,renew,f,f_best,acc_rate\n";
  for (const auto& r : trace) {
    out << r.k << ',' << r.t << ',' << r.iteration_count << ',' << r.renew << ',' << r.f << ','
        << r.f_best << ',' << r.acc_rate << '\n';
  }
  return out.str();
}

}  // namespace anneal
