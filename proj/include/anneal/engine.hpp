#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anneal/acceptance.hpp"
#include "anneal/core.hpp"
#include "anneal/moves.hpp"
#include "anneal/problem.hpp"
#include "anneal/temperature.hpp"

namespace anneal {

struct LocalSearchSpec;

enum class StopReason {
  final_temperature,
  frozen,
  acceptance_rate,
  objective,
  acceptance_probability,
  max_evaluations,
  max_outer,
  max_seconds,
};

enum class InnerStop { none, iterations, chain_cap, renew_cap, stable_mean, budget };

std::string_view to_string(StopReason reason);
std::optional<StopReason> parse_stop_reason(std::string_view name);
std::string_view to_string(InnerStop cause);

// The lowest temperature a run will use; reaching it stops the run with
// final_temperature.
inline constexpr double kTemperatureFloor = 1e-300;

struct AnnealConfig {
  InitTempSpec init_temp = KirkpatrickInit{};
  // Explicit T0; overrides init_temp when set.
  std::optional<double> t0;
  CoolingLaw cooling = Geometric{};
  MoveSpec move = SingleCoordinate{};
  AcceptanceSpec acceptance;

  // Proposals with delta < -delta_threshold are accepted outright.
  double delta_threshold = 1e-12;
  // Neighbourhood-size surrogate; n_size_per_dim * n when unset.
  std::optional<long long> n_size;
  long long n_size_per_dim = 100;
  long long n_factor = 10;
  // The inner loop also ends once renew >= cut * n_factor * n_size.
  double cut = 1.0;
  long long frozen_limit = 5;

  std::optional<double> t_final;
  // Objective-based stops (outer) and the stable-mean inner stop.
  std::optional<double> objective_tolerance;
  std::optional<long long> stable_window;
  std::optional<double> chi_final;
  std::optional<double> p_floor;

  long long max_evaluations = 1'000'000;
  std::optional<long long> max_outer;
  std::optional<double> max_seconds;
  // Upper bound on the inner-loop (Markov chain) length.
  std::optional<long long> chain_cap;

  std::uint64_t seed = 0;
  // Starting point; a random feasible point when unset.
  std::optional<Vector> x0;
  bool record_trace = false;
};

void validate(const AnnealConfig& config);

long long effective_n_size(const AnnealConfig& config, Index n);

struct TraceRow {
  long long k = 0;
  double t = 0.0;
  long long iteration_count = 0;
  long long renew = 0;
  // Accepted moves counted independently of renew.
  long long accepted = 0;
  double f = 0.0;
  double f_best = 0.0;
  double acc_rate = 0.0;
  // Best-So-Far no-improvement counters: proposals within the inner loop and
  // outer loops without improvement.
  long long inner_index = 0;
  long long outer_index = 0;
  // Temperature before the never-heat cap (Huang), else equal to the next T.
  double t_uncapped = 0.0;
  bool heated = false;
};

// One row per phase of a composite method (hybrid rounds, generations, ...).
struct PhaseRow {
  long long index = 0;
  std::string phase;
  double f_best = 0.0;
  long long evaluations = 0;
};

struct RunRecord {
  std::string problem;
  std::string method;
  std::uint64_t seed = 0;
  double f_best = 0.0;
  Vector x_best;
  // Current point at the end of the run.
  double f_final = 0.0;
  Vector x_final;
  long long evaluations = 0;
  long long outer_iterations = 0;
  // Initial temperature of the (last) annealing phase.
  double t0 = 0.0;
  double wall_seconds = 0.0;
  StopReason stop_reason = StopReason::max_evaluations;
  std::vector<TraceRow> trace;
  std::vector<PhaseRow> phases;
  // Instrumentation counters (fast-path accepts, heating events, ...).
  std::map<std::string, long long> counters;
};

// Per-temperature statistics of one inner loop. Mean and sigma are over the
// objective values of the proposals.
struct TemperatureStats {
  long long accepted = 0;
  long long proposed = 0;
  double f_mean = 0.0;
  double f_sigma = 0.0;
  double mean_accept_probability = 1.0;
  std::optional<double> previous_mean;

  double rate() const {
    return proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
};

struct AnnealState {
  Vector x;
  double f = 0.0;
  double t = 1.0;
  long long k = 0;
  long long iteration_count = 0;
  long long renew = 0;
  long long best_count = 0;
  long long frozen_count = 0;
  Vector x_best;
  double f_best = 0.0;
  long long evaluations = 0;
  TemperatureStats acc_stats;
  MoveState move_state;
  double last_delta = std::numeric_limits<double>::infinity();
  long long inner_index = 0;
  long long outer_index = 0;
  std::deque<double> f_window;
  double elapsed_seconds = 0.0;

  // Totals over the run.
  long long fast_path_accepts = 0;
  long long strict_improvements = 0;
  long long uphill_accepts = 0;
  long long downhill_proposals = 0;
  long long downhill_accepts = 0;
  long long heat_count = 0;
};

// Fresh state at x with incumbent x.
AnnealState initial_state(const Vector& x, double f, double t, const MoveSpec& move);

struct InnerResult {
  InnerStop cause = InnerStop::none;
  bool heated = false;
};

// Heating-annealing: uphill proposals are accepted and heat T by `factor`
// while T is below `ceiling`.
struct HeatOptions {
  double factor = 1.5;
  double ceiling = 1.0;
  bool active = true;
};

// One inner loop at state.t. Every proposal counts as an iteration.
InnerResult inner_loop(AnnealState& state, Evaluator& eval, const AnnealConfig& config,
                       Rng& rng, HeatOptions* heat = nullptr);

std::optional<InnerStop> stop_inner(const AnnealState& state, const AnnealConfig& config,
                                    Index n);

// Checks the outer criteria in priority order and returns the first that
// fires.
std::optional<StopReason> stop_outer(const AnnealState& state, const AnnealConfig& config,
                                     std::optional<double> f_opt);

// Algorithm 1 on a caller-owned evaluator and rng, starting from
// config.x0 (or a random point). Used by the composite methods to share a
// budget.
RunRecord anneal(const Problem& problem, const AnnealConfig& config, Evaluator& eval, Rng& rng,
                 std::optional<double> t0_override = std::nullopt);

RunRecord run_sa(const Problem& problem, const AnnealConfig& config);

RunRecord run_heating_annealing(const Problem& problem, const AnnealConfig& config,
                                double heat_factor);

// As run_sa, with the final state reset to the incumbent.
RunRecord run_memory_annealing(const Problem& problem, const AnnealConfig& config);

RunRecord run_annealing_then_local(const Problem& problem, const AnnealConfig& config,
                                   const LocalSearchSpec& ls);

// snun alternations of a local phase and an annealing phase; the SA budget is
// split evenly across the annealing phases.
RunRecord run_local_then_annealing(const Problem& problem, const AnnealConfig& config,
                                   const LocalSearchSpec& ls, int snun);

// CSV with columns k,T,iteration_count,renew,f,f_best,acc_rate.
std::string trace_csv(const std::vector<TraceRow>& trace);

}  // namespace anneal
