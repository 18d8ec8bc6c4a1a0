#include "anneal/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/SVD>

#include "anneal/bench.hpp"

namespace anneal {

namespace {

// Smallest singular value of the unit-length edge matrix below which the
// simplex counts as flat.
constexpr double kFlatnessFloor = 1e-10;

class SimplexSearch {
 public:
  SimplexSearch(const LocalSearchSpec& spec, Evaluator& eval)
      : spec_(spec), eval_(eval), problem_(eval.problem()), n_(problem_.dim()),
        rng_(spec.seed) {
    result_.min_failures_before_shrink = std::numeric_limits<long long>::max();
  }

  LocalResult run(const Vector& x0) {
    if (x0.size() != n_ || !contains(problem_, x0)) {
      throw ConfigError("local_search: starting point is not feasible");
    }
    const long long start_count = eval_.count();
    try {
      const double f0 = value(x0);
      build(x0, f0);
      search();
    } catch (const BudgetExhausted&) {
      result_.converged = false;
      result_.cause = "budget";
    }
    result_.x_star = best_x_;
    result_.f_star = best_f_;
    result_.evaluations = eval_.count() - start_count;
    if (result_.min_failures_before_shrink == std::numeric_limits<long long>::max()) {
      result_.min_failures_before_shrink = 0;
    }
    return result_;
  }

 private:
  double value(const Vector& x) {
    const double f = eval_(x);
    if (f < best_f_) {
      best_f_ = f;
      best_x_ = x;
    }
    return f;
  }

  void build(const Vector& base, double f_base) {
    const Vector width = problem_.scale();
    v_.assign(static_cast<std::size_t>(n_ + 1), base);
    f_.assign(static_cast<std::size_t>(n_ + 1), f_base);
    for (Index i = 0; i < n_; ++i) {
      Vector y = base;
      const double h = spec_.initial_simplex_scale * width[i];
      y[i] += h;
      if (problem_.is_box() && y[i] > problem_.box().upper[i]) y[i] = base[i] - h;
      y = repair(problem_, y);
      v_[static_cast<std::size_t>(i + 1)] = y;
      f_[static_cast<std::size_t>(i + 1)] = value(y);
    }
  }

  std::vector<std::size_t> order_by(const std::vector<double>& keys) const {
    std::vector<std::size_t> idx(keys.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    return idx;
  }

  bool converged(const std::vector<std::size_t>& order) const {
    const double spread = f_[order.back()] - f_[order.front()];
    if (!(spread <= spec_.tol)) return false;
    const Vector& b = v_[order.front()];
    double diameter = 0.0;
    for (const auto& v : v_) diameter = std::max(diameter, (v - b).lpNorm<Eigen::Infinity>());
    return diameter <= spec_.x_tol;
  }

  bool degenerate(std::size_t best) const {
    if (n_ == 0) return false;
    Eigen::MatrixXd edges(n_, n_);
    Index col = 0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i == best) continue;
      edges.col(col) = v_[i] - v_[best];
      const double len = edges.col(col).norm();
      if (len == 0.0) return true;
      edges.col(col) /= len;
      ++col;
    }
    return Eigen::JacobiSVD<Eigen::MatrixXd>(edges).singularValues().minCoeff() < kFlatnessFloor;
  }

  Vector centroid_without(std::size_t skip) const {
    Vector c = Vector::Zero(n_);
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i != skip) c += v_[i];
    }
    return c / static_cast<double>(n_);
  }

  std::vector<double> ranking_keys() {
    std::vector<double> keys = f_;
    if (const auto* th = std::get_if<SdsThermal>(&spec_.kind)) {
      const double kt = th->k_b * th->temperature;
      for (double& k : keys) {
        const double z = std::clamp(uniform01(rng_), 1e-12, std::nextafter(1.0, 0.0));
        if (kt != 0.0) k += kt * std::log(z);
      }
    }
    return keys;
  }

  void shrink_towards(std::size_t best, double factor) {
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i == best) continue;
      v_[i] = repair(problem_, v_[best] + factor * (v_[i] - v_[best]));
      f_[i] = value(v_[i]);
    }
    ++result_.shrinks;
  }

  // Returns false when the search should stop.
  bool handle_convergence_or_degeneracy(const std::vector<std::size_t>& order,
                                        long long iteration) {
    if (converged(order)) {
      if (restarts_left_ > 0 && best_f_ < last_restart_f_) {
        --restarts_left_;
        last_restart_f_ = best_f_;
        build(best_x_, best_f_);
        return true;
      }
      result_.converged = true;
      result_.cause = "tolerance";
      return false;
    }
    const bool check = n_ <= 10 || iteration % n_ == 0;
    if (check && degenerate(order.front())) {
      if (degenerate_restart_used_) {
        result_.converged = false;
        result_.cause = "degenerate";
        return false;
      }
      degenerate_restart_used_ = true;
      ++result_.degenerate_restarts;
      build(best_x_, best_f_);
    }
    return true;
  }

  void search() {
    restarts_left_ = spec_.restarts;
    last_restart_f_ = std::numeric_limits<double>::infinity();
    for (long long it = 0; it < spec_.max_iterations; ++it) {
      result_.iterations = it;
      const auto order = order_by(f_);
      if (!handle_convergence_or_degeneracy(order, it)) return;
      if (const auto* nm = std::get_if<NelderMead>(&spec_.kind)) {
        nelder_mead_step(*nm, order_by(f_));
      } else {
        const int w = std::visit(
            [](const auto& k) -> int {
              if constexpr (std::is_same_v<std::decay_t<decltype(k)>, NelderMead>) {
                return 0;
              } else {
                return k.n_worst;
              }
            },
            spec_.kind);
        sds_step(w > 0 ? std::min<Index>(w, n_) : n_);
      }
    }
    result_.iterations = spec_.max_iterations;
    result_.converged = false;
    result_.cause = "max_iterations";
  }

  void nelder_mead_step(const NelderMead& c, const std::vector<std::size_t>& order) {
    const std::size_t b = order.front();
    const std::size_t w = order.back();
    const double f_second = f_[order[order.size() - 2]];
    const Vector cen = centroid_without(w);
    const Vector xr = repair(problem_, cen + c.reflect * (cen - v_[w]));
    const double fr = value(xr);
    ++result_.reflections;
    if (fr < f_[b]) {
      const Vector xe = repair(problem_, cen + c.expand * (xr - cen));
      const double fe = value(xe);
      if (fe < fr) {
        v_[w] = xe;
        f_[w] = fe;
      } else {
        v_[w] = xr;
        f_[w] = fr;
      }
      return;
    }
    if (fr < f_second) {
      v_[w] = xr;
      f_[w] = fr;
      return;
    }
    if (fr < f_[w]) {
      const Vector xc = repair(problem_, cen + c.contract * (xr - cen));
      const double fc = value(xc);
      if (fc <= fr) {
        v_[w] = xc;
        f_[w] = fc;
        return;
      }
    } else {
      const Vector xc = repair(problem_, cen + c.contract * (v_[w] - cen));
      const double fc = value(xc);
      if (fc < f_[w]) {
        v_[w] = xc;
        f_[w] = fc;
        return;
      }
    }
    shrink_towards(b, c.shrink);
  }

  void sds_step(Index n_worst) {
    const auto order = order_by(ranking_keys());
    long long failures = 0;
    for (Index j = 0; j < n_worst; ++j) {
      const std::size_t idx = order[order.size() - 1 - static_cast<std::size_t>(j)];
      const Vector cen = centroid_without(idx);
      const Vector xr = repair(problem_, 2.0 * cen - v_[idx]);
      const double fr = value(xr);
      ++result_.reflections;
      if (fr < f_[idx]) {
        v_[idx] = xr;
        f_[idx] = fr;
        return;
      }
      ++failures;
    }
    result_.min_failures_before_shrink = std::min(result_.min_failures_before_shrink, failures);
    shrink_towards(order.front(), 0.5);
  }

  const LocalSearchSpec& spec_;
  Evaluator& eval_;
  const Problem& problem_;
  Index n_;
  Rng rng_;
  std::vector<Vector> v_;
  std::vector<double> f_;
  Vector best_x_;
  double best_f_ = std::numeric_limits<double>::infinity();
  int restarts_left_ = 0;
  double last_restart_f_ = std::numeric_limits<double>::infinity();
  bool degenerate_restart_used_ = false;
  LocalResult result_;
};

}  // namespace

void validate(const LocalSearchSpec& spec) {
  require(spec.tol > 0.0, "local_search: tol must be > 0");
  require(spec.x_tol > 0.0, "local_search: x_tol must be > 0");
  require(spec.max_iterations >= 1, "local_search: max_iterations must be >= 1");
  require(spec.initial_simplex_scale > 0.0, "local_search: initial_simplex_scale must be > 0");
  require(spec.restarts >= 0, "local_search: restarts must be >= 0");
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, NelderMead>) {
          require(k.reflect > 0.0, "nelder_mead: reflect must be > 0");
          require(k.expand > 1.0, "nelder_mead: expand must be > 1");
          require(k.contract > 0.0 && k.contract < 1.0, "nelder_mead: contract must be in (0, 1)");
          require(k.shrink > 0.0 && k.shrink < 1.0, "nelder_mead: shrink must be in (0, 1)");
        } else {
          require(k.n_worst >= 0, "sds: n_worst must be >= 0");
          if constexpr (std::is_same_v<K, SdsThermal>) {
            require(k.k_b >= 0.0 && k.temperature >= 0.0, "sds_thermal: k_B T must be >= 0");
          }
        }
      },
      spec.kind);
}

LocalResult local_search(const LocalSearchSpec& spec, Evaluator& eval, const Vector& x0) {
  validate(spec);
  SimplexSearch search(spec, eval);
  return search.run(x0);
}

LocalResult local_search(const LocalSearchSpec& spec, const Problem& problem, const Vector& x0) {
  Evaluator eval(problem);
  return local_search(spec, eval, x0);
}

TrialStatistics trial_statistics(const LocalSearchSpec& spec, const Problem& problem, int starts,
                                 std::uint64_t seed, double delta) {
  require(starts >= 1, "trial_statistics: starts must be >= 1");
  TrialStatistics out;
  out.values.reserve(static_cast<std::size_t>(starts));
  for (int i = 0; i < starts; ++i) {
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(i)));
    LocalSearchSpec s = spec;
    s.seed = substream_seed(seed, static_cast<std::uint64_t>(i), 1);
    out.values.push_back(local_search(s, problem, random_feasible(problem, rng)).f_star);
  }
  const Summary sum = aggregate(out.values, delta);
  out.best = sum.best;
  out.frequency = sum.frequency;
  out.mean = sum.mean;
  out.variance = sum.variance;
  return out;
}

}  // namespace anneal
