#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anneal/engine.hpp"
#include "anneal/problem.hpp"

namespace anneal {

struct Summary {
  double best = 0.0;
  double frequency = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

// best = min; frequency = share of values within delta * max(|best|, 1) of
// best; mean and (n - 1) sample variance, 0 for a single value.
Summary aggregate(std::span<const double> values, double delta = 1e-4);

// t / t_min when |(o - b) / b'| <= delta (b' = b, or 1 when b = 0), else
// rho_max.
double performance_ratio(double t, double t_min, double o, double b, double delta,
                         double rho_max);

struct ProfilePoint {
  double tau = 1.0;
  double p = 0.0;
};

struct PerformanceProfile {
  std::vector<std::string> solvers;
  std::map<std::string, std::vector<double>> ratios;
  std::map<std::string, std::vector<ProfilePoint>> curves;
};

// p_s(tau) = |{p : rho_{p,s} <= tau}| / n_p on each grid point. Every
// solver needs one ratio per problem.
PerformanceProfile performance_profile(const std::map<std::string, std::vector<double>>& ratios,
                                       std::span<const double> tau_grid);

// `points` values from 1 to rho_max, evenly spaced in log tau.
std::vector<double> tau_grid(double rho_max, int points);

using Solver = std::function<RunRecord(const Problem&, std::uint64_t seed)>;

struct SolverEntry {
  std::string name;
  Solver run;
};

struct Trial {
  std::string problem;
  Index dim = 0;
  std::string solver;
  int rep = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  RunRecord record;
};

struct ReportRow {
  std::string problem;
  Index dim = 0;
  std::string solver;
  int reps = 0;
  double best = 0.0;
  double frequency = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_evals = 0.0;
  double mean_seconds = 0.0;
  int failures = 0;
};

struct BenchmarkReport {
  std::vector<ReportRow> rows;
  std::vector<Trial> trials;
  double delta = 1e-4;
};

// Runs every (problem, solver, rep) with seed base_seed + rep on up to
// `jobs` threads. Failing runs are recorded, not rethrown.
BenchmarkReport run_trials(const std::vector<Problem>& problems,
                           const std::vector<SolverEntry>& solvers, int reps,
                           std::uint64_t base_seed, int jobs = 1, double delta = 1e-4);

// Summary rows from retained trials, in first-appearance order of
// (problem, dim, solver). Failed runs are excluded from the statistics.
std::vector<ReportRow> summarize(const std::vector<Trial>& trials, double delta);

// Per-solver ratios over the problems of `trials`. A solver's value on a
// problem is its best f over successful reps and its resource the mean
// evaluation count of those reps; b_p is the best value over solvers.
// rho_max defaults to twice the largest successful ratio, at least 100.
struct RatioTable {
  std::vector<std::string> problems;
  std::map<std::string, std::vector<double>> ratios;
  double rho_max = 100.0;
};
RatioTable ratios_from_trials(const std::vector<Trial>& trials, double delta,
                              std::optional<double> rho_max = std::nullopt);

inline constexpr const char* kReportHeader =
    "problem,dim,solver,reps,best,frequency,mean,variance,mean_evals,mean_seconds";

std::string report_csv(const std::vector<ReportRow>& rows);
std::string profile_csv(const PerformanceProfile& profile);

}  // namespace anneal
