#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "anneal/core.hpp"

namespace anneal {

// Axis-aligned box, lower_i < upper_i.
struct Box {
  Vector lower;
  Vector upper;

  static Box uniform(Index n, double lo, double hi) {
    return {Vector::Constant(n, lo), Vector::Constant(n, hi)};
  }
  Vector width() const { return upper - lower; }
};

// {x >= 0, sum x = 1}.
struct UnitSimplex {
  Index n = 0;
};

using Region = std::variant<Box, UnitSimplex>;

// f(x) = coeffs . x + offset; enables the incremental delta path.
struct Affine {
  Vector coeffs;
  double offset = 0.0;
};

using Objective = std::function<double(const Vector&)>;

class Problem {
 public:
  Problem(std::string name, Region region, Objective objective,
          std::optional<double> known_optimum = std::nullopt,
          std::optional<Vector> known_minimizer = std::nullopt,
          std::optional<Affine> incremental = std::nullopt);

  // Builds f(x) = a.x + b over the given region with the incremental path.
  static Problem affine(std::string name, Region region, Affine a);

  const std::string& name() const { return name_; }
  Index dim() const { return dim_; }
  const Region& region() const { return region_; }
  bool is_box() const { return std::holds_alternative<Box>(region_); }
  const Box& box() const { return std::get<Box>(region_); }
  const std::optional<double>& known_optimum() const { return known_optimum_; }
  const std::optional<Vector>& known_minimizer() const { return known_minimizer_; }
  const std::optional<Affine>& incremental() const { return incremental_; }

  // Raw objective; no checks.
  double operator()(const Vector& x) const { return objective_(x); }

  // Coordinate range used to scale step sizes: box widths, or 1 on the simplex.
  Vector scale() const;

 private:
  std::string name_;
  Region region_;
  Objective objective_;
  Index dim_ = 0;
  std::optional<double> known_optimum_;
  std::optional<Vector> known_minimizer_;
  std::optional<Affine> incremental_;
};

// Checked evaluation: dimension mismatch or non-finite output throws
// EvaluationError carrying x.
double evaluate(const Problem& problem, const Vector& x);

// Membership predicate for the feasible region, with tolerance.
bool contains(const Problem& problem, const Vector& x, double tol = 1e-12);

// Uniform feasible point: per-coordinate uniform on a box, Dirichlet(1,...,1)
// on the simplex.
Vector random_feasible(const Problem& problem, Rng& rng);

// Clip into the box, or project negatives to zero and renormalize on the
// simplex (all-zero maps to the barycentre).
Vector repair(const Problem& problem, const Vector& x);

// f(x') - f(x). Uses a.(x' - x) when the problem is affine, otherwise
// evaluates f(x') and, unless f_x is supplied, f(x).
double delta(const Problem& problem, const Vector& x, const Vector& x_new,
             std::optional<double> f_x = std::nullopt);

// Thrown by Evaluator when a call would exceed its budget.
class BudgetExhausted : public SearchError {
 public:
  using SearchError::SearchError;
};

// Run-owned evaluation counter with an optional budget. The counter belongs
// to a run, not to the (shared, immutable) problem.
class Evaluator {
 public:
  explicit Evaluator(const Problem& problem,
                     long long budget = std::numeric_limits<long long>::max())
      : problem_(&problem), budget_(budget) {}
  // Holds a pointer to the problem.
  explicit Evaluator(Problem&&, long long = 0) = delete;

  const Problem& problem() const { return *problem_; }

  // Throws BudgetExhausted once the budget is spent.
  double operator()(const Vector& x) {
    if (count_ >= budget_) throw BudgetExhausted("evaluation budget exhausted");
    ++count_;
    return evaluate(*problem_, x);
  }

  // Same contract as the free delta(); only objective calls are counted.
  double delta(const Vector& x, const Vector& x_new, std::optional<double> f_x);

  long long count() const { return count_; }
  long long budget() const { return budget_; }
  long long remaining() const { return budget_ > count_ ? budget_ - count_ : 0; }
  bool exhausted() const { return count_ >= budget_; }
  void set_budget(long long budget) { budget_ = budget; }

 private:
  const Problem* problem_;
  long long budget_;
  long long count_ = 0;
};

struct Proportional {};
struct Linear {
  double a = 1.0;
  double b = 0.0;
};
using FitnessKind = std::variant<Proportional, Linear>;

// Proportional: f_i / sum f. Linear: a f + b.
std::vector<double> fitness_transform(std::span<const double> values,
                                      const FitnessKind& kind);

}  // namespace anneal
