#include "anneal/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace anneal {

namespace {

Index region_dim(const Region& region) {
  return std::visit(
      [](const auto& r) -> Index {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Box>) {
          return r.lower.size();
        } else {
          return r.n;
        }
      },
      region);
}

std::string describe(const Vector& x) {
  std::ostringstream os;
  os << "(";
  for (Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

Problem::Problem(std::string name, Region region, Objective objective,
                 std::optional<double> known_optimum,
                 std::optional<Vector> known_minimizer,
                 std::optional<Affine> incremental)
    : name_(std::move(name)),
      region_(std::move(region)),
      objective_(std::move(objective)),
      dim_(region_dim(region_)),
      known_optimum_(known_optimum),
      known_minimizer_(std::move(known_minimizer)),
      incremental_(std::move(incremental)) {
  require(dim_ > 0, "problem '" + name_ + "': dimension must be positive");
  require(static_cast<bool>(objective_), "problem '" + name_ + "': missing objective");
  if (const auto* box = std::get_if<Box>(&region_)) {
    require(box->upper.size() == dim_, "problem '" + name_ + "': bound sizes differ");
    require(((box->upper - box->lower).array() > 0.0).all(),
            "problem '" + name_ + "': box needs lower < upper in every coordinate");
  }
  if (known_minimizer_) {
    require(known_minimizer_->size() == dim_,
            "problem '" + name_ + "': minimizer has wrong dimension");
  }
  if (incremental_) {
    require(incremental_->coeffs.size() == dim_,
            "problem '" + name_ + "': affine coefficients have wrong dimension");
  }
}

Problem Problem::affine(std::string name, Region region, Affine a) {
  Affine copy = a;
  Objective f = [a = std::move(a)](const Vector& x) { return a.coeffs.dot(x) + a.offset; };
  return Problem(std::move(name), std::move(region), std::move(f), std::nullopt,
                 std::nullopt, std::move(copy));
}

Vector Problem::scale() const {
  if (const auto* b = std::get_if<Box>(&region_)) return b->width();
  return Vector::Ones(dim_);
}

double evaluate(const Problem& problem, const Vector& x) {
  if (x.size() != problem.dim()) {
    throw EvaluationError("problem '" + problem.name() + "' expects dimension " +
                              std::to_string(problem.dim()) + ", got " +
                              std::to_string(x.size()),
                          x);
  }
  const double f = problem(x);
  if (!std::isfinite(f)) {
    throw EvaluationError(
        "problem '" + problem.name() + "' returned a non-finite value at " + describe(x), x);
  }
  return f;
}

bool contains(const Problem& problem, const Vector& x, double tol) {
  if (x.size() != problem.dim() || !x.allFinite()) return false;
  if (problem.is_box()) {
    const Box& b = problem.box();
    return ((x - b.lower).array() >= -tol).all() && ((b.upper - x).array() >= -tol).all();
  }
  return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol * x.size();
}

Vector random_feasible(const Problem& problem, Rng& rng) {
  const Index n = problem.dim();
  Vector x(n);
  if (problem.is_box()) {
    const Box& b = problem.box();
    for (Index i = 0; i < n; ++i) x[i] = uniform(rng, b.lower[i], b.upper[i]);
    return x;
  }
  // Normalized unit exponentials are Dirichlet(1, ..., 1).
  for (Index i = 0; i < n; ++i) x[i] = -std::log1p(-uniform01(rng));
  const double s = x.sum();
  if (s <= 0.0) return Vector::Constant(n, 1.0 / static_cast<double>(n));
  return x / s;
}

Vector repair(const Problem& problem, const Vector& x) {
  if (x.size() != problem.dim()) {
    throw EvaluationError("repair: dimension mismatch", x);
  }
  if (!x.allFinite()) throw EvaluationError("repair: non-finite point " + describe(x), x);
  if (problem.is_box()) {
    const Box& b = problem.box();
    return x.cwiseMax(b.lower).cwiseMin(b.upper);
  }
  Vector y = x.cwiseMax(0.0);
  const double s = y.sum();
  if (s <= 0.0) return Vector::Constant(y.size(), 1.0 / static_cast<double>(y.size()));
  if (s == 1.0) return y;
  return y / s;
}

double delta(const Problem& problem, const Vector& x, const Vector& x_new,
             std::optional<double> f_x) {
  if (const auto& a = problem.incremental()) {
    if (x.size() != problem.dim() || x_new.size() != problem.dim()) {
      throw EvaluationError("delta: dimension mismatch", x_new);
    }
    return a->coeffs.dot(x_new - x);
  }
  const double f_old = f_x ? *f_x : evaluate(problem, x);
  return evaluate(problem, x_new) - f_old;
}

double Evaluator::delta(const Vector& x, const Vector& x_new, std::optional<double> f_x) {
  if (problem_->incremental()) return anneal::delta(*problem_, x, x_new, f_x);
  const double f_old = f_x ? *f_x : (*this)(x);
  return (*this)(x_new) - f_old;
}

std::vector<double> fitness_transform(std::span<const double> values,
                                      const FitnessKind& kind) {
  std::vector<double> out(values.begin(), values.end());
  if (const auto* lin = std::get_if<Linear>(&kind)) {
    for (double& v : out) v = lin->a * v + lin->b;
    return out;
  }
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (total == 0.0) throw ConfigError("proportional fitness needs a non-zero sum");
  for (double& v : out) v /= total;
  return out;
}

}  // namespace anneal
