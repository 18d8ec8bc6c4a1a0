#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anneal/engine.hpp"
#include "anneal/local_search.hpp"

namespace anneal {

// Local search from the incumbent, then a full annealing run from the local
// result, repeated while the annealing phase improves on the local result by
// more than improvement_threshold.
struct HybridConfig {
  AnnealConfig sa;
  LocalSearchSpec ls;
  double improvement_threshold = 1e-3;
  int max_rounds = 20;
  // Shared by every phase of the run.
  long long max_evaluations = 500'000;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

// The defaults used for the benchmark tables.
HybridConfig default_hybrid_config();
// Kirkpatrick T0, T := 0.9 T, single-coordinate moves, 10 n proposals per
// chain (at most 1000), 300 temperature steps, 3e5 evaluations per phase.
AnnealConfig default_hybrid_sa();
// Nelder-Mead, up to 10 restarts while they improve.
LocalSearchSpec default_hybrid_ls();

void validate(const HybridConfig& config);

RunRecord run_hybrid_ls_sa(const Problem& problem, const HybridConfig& config);

// ---- SA-embedded evolution strategies -----------------------------------

struct Individual {
  Vector x;
  Vector sigma;
  double fitness = 0.0;
};

struct EvoConfig {
  int mu = 10;
  int lambda = 40;
  int zeta = 10;
  std::optional<double> tau;
  std::optional<double> tau_prime;
  // Initial step size as a fraction of the box width per axis.
  double sigma0 = 0.05;
  // Embedded SA run; none gives the plain strategy.
  std::optional<AnnealConfig> sa_budget;
  int generations = 1000;
  long long max_evaluations = 100'000;
  // Stop once f_best is within this of a known optimum.
  std::optional<double> objective_tolerance;
  // SACEP: refine every parent only in generation 0.
  bool sa_parents_once = true;
  std::uint64_t seed = 0;
  bool record_population = false;
};

EvoConfig default_evo_config();
// A short quench: chains of n proposals, T := T/2 for 20 steps.
AnnealConfig default_embedded_sa();

void validate(const EvoConfig& config, bool recombination);

// 1 / sqrt(2 sqrt(n)) and 1 / sqrt(2 n).
double default_tau(Index n);
double default_tau_prime(Index n);

// x'_i = x_i + sigma_i N_i and sigma'_i = sigma_i exp(tau' N + tau N_i), with
// the global draw N and per-coordinate draws N_i given.
Individual mutate_with_draws(const Individual& ind, double tau, double tau_prime,
                             double global_draw, const Vector& coordinate_draws);

// Draws one global normal and then n per-coordinate normals; the child is
// repaired into the problem's region.
Individual mutate(const Problem& problem, const Individual& ind, double tau, double tau_prime,
                  Rng& rng);

// Coordinate i comes from p1 when take_first[i], else from p2; x_i and
// sigma_i travel together.
Individual recombine_with_coins(const Individual& p1, const Individual& p2,
                                const std::vector<bool>& take_first);

Individual recombine_discrete(const Individual& p1, const Individual& p2, Rng& rng);

// Wins of each individual against zeta opponents drawn with replacement from
// the rest of the pool; a win is a strictly lower fitness.
std::vector<int> tournament_scores(const std::vector<double>& fitness, int zeta, Rng& rng);

struct PopulationRow {
  int generation = 0;
  int index = 0;
  double f = 0.0;
  double mean_sigma = 0.0;
};

struct EvoResult {
  RunRecord record;
  std::vector<PopulationRow> population;
};

EvoResult run_sa_saes(const Problem& problem, const EvoConfig& config);
EvoResult run_sa_sacep(const Problem& problem, const EvoConfig& config);

std::string population_csv(const std::vector<PopulationRow>& rows);

}  // namespace anneal
