#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "anneal/core.hpp"
#include "anneal/problem.hpp"

namespace anneal {

struct NelderMead {
  double reflect = 1.0;
  double expand = 2.0;
  double contract = 0.5;
  double shrink = 0.5;
};

// Reflect each of the n worst vertices through the centroid of the others;
// shrink toward the best vertex when all of them fail. n_worst = 0 means n.
struct Sds {
  int n_worst = 0;
};

// Sds with vertices ranked by f + k_B T ln z, z uniform on [1e-12, 1).
struct SdsThermal {
  int n_worst = 0;
  double k_b = 1.0;
  double temperature = 0.0;
};

using LocalKind = std::variant<NelderMead, Sds, SdsThermal>;

struct LocalSearchSpec {
  LocalKind kind = NelderMead{};
  // Converged when the f-spread over the simplex is below tol and its
  // diameter below x_tol.
  double tol = 1e-10;
  double x_tol = 1e-8;
  long long max_iterations = 20000;
  // Initial offsets as a fraction of the box width per axis.
  double initial_simplex_scale = 0.05;
  // Fresh simplices built at the best vertex after convergence, kept while
  // they improve.
  int restarts = 0;
  std::uint64_t seed = 0;
};

struct LocalResult {
  Vector x_star;
  double f_star = 0.0;
  long long evaluations = 0;
  bool converged = false;
  long long iterations = 0;
  std::string cause;
  long long reflections = 0;
  long long shrinks = 0;
  long long degenerate_restarts = 0;
  // Smallest number of consecutive failed reflections seen before a shrink.
  long long min_failures_before_shrink = 0;
};

void validate(const LocalSearchSpec& spec);

LocalResult local_search(const LocalSearchSpec& spec, const Problem& problem, const Vector& x0);

// Same search on a caller-owned evaluator; stops with cause "budget" when it
// runs out.
LocalResult local_search(const LocalSearchSpec& spec, Evaluator& eval, const Vector& x0);

struct TrialStatistics {
  double best = 0.0;
  double frequency = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> values;
};

TrialStatistics trial_statistics(const LocalSearchSpec& spec, const Problem& problem,
                                 int starts, std::uint64_t seed, double delta = 1e-4);

}  // namespace anneal
