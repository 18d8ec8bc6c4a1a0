#pragma once

#include <variant>

#include "anneal/core.hpp"
#include "anneal/problem.hpp"

namespace anneal {

// Keep n-1 coordinates, resample the remaining one uniformly within its
// bounds.
struct SingleCoordinate {};

// i uniform in {1,2,3}: resample one coordinate, m (uniform in 1..n)
// distinct coordinates, or the whole vector.
struct RandomSubset {};

// Keep n-2 coordinates, resample one of the other two so the partial sum
// stays <= 1, set the last to 1 - sum.
struct SimplexMove {};

// x'_i = x_i + q d, d uniform on (-1, 1), with q adapted every `window`
// proposals by q := g(Acc) q, g(a) = (a - 0.5)^3 + 1 shifted so that
// `target_acc` is its fixed point.
struct StepDirection {
  double q0 = 1.0;
  double target_acc = 0.5;
  int window = 100;
};

// Cyclic single-axis move x_i += r v_i, r uniform on [-1, 1]. A length-1
// `v` is broadcast to every axis.
struct Corana {
  Vector v = Vector::Ones(1);
};

struct Gaussian {
  double scale = 1.0;
};

struct Cauchy {
  double scale = 1.0;
};

using MoveSpec =
    std::variant<SingleCoordinate, RandomSubset, SimplexMove, StepDirection, Corana, Gaussian,
                 Cauchy>;

// Acceptance-rate presets for StepDirection::target_acc.
inline constexpr double kMikiTargetAcceptance = 0.5;
inline constexpr double kOneFifthTargetAcceptance = 0.2;

struct MoveState {
  double q = 1.0;
  Index axis_cursor = 0;
  long long accepted = 0;
  long long proposed = 0;
};

inline constexpr int kStepRetryLimit = 100;

void validate(const MoveSpec& spec);

MoveState initial_move_state(const MoveSpec& spec);

// Feasible neighbour of a feasible x. Box-only kinds (single_coordinate,
// random_subset) dispatch to the simplex move on simplex regions.
Vector propose(const MoveSpec& spec, MoveState& state, const Vector& x,
               const Problem& problem, Rng& rng);

Vector propose_simplex(const Vector& x, Rng& rng);

// g(a) = (a - 0.5)^3 + 1.
double step_gain(double acceptance_rate);

// q := g(Acc + 0.5 - target) q over the current window, then resets the
// window counters.
MoveState adapt_step(MoveState state, double target_acc = kMikiTargetAcceptance);

// Records the outcome of the last proposal and adapts q when the window is
// full. No-op for kinds without a step length.
void record_outcome(const MoveSpec& spec, MoveState& state, bool accepted);

}  // namespace anneal
