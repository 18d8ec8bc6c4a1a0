#include "anneal/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace anneal {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool reached(const Problem& problem, double f_best, std::optional<double> tol) {
  if (!tol || !problem.known_optimum()) return false;
  const double f_opt = *problem.known_optimum();
  return (f_best - f_opt) / std::max(std::abs(f_opt), 1.0) <= *tol;
}

}  // namespace

AnnealConfig default_hybrid_sa() {
  AnnealConfig sa;
  sa.init_temp = KirkpatrickInit{};
  sa.cooling = Geometric{0.9};
  sa.move = SingleCoordinate{};
  sa.n_size_per_dim = 10;
  sa.n_factor = 10;
  sa.frozen_limit = 300;
  sa.max_outer = 300;
  sa.chain_cap = 1000;
  sa.max_evaluations = 300'000;
  return sa;
}

LocalSearchSpec default_hybrid_ls() {
  LocalSearchSpec ls;
  ls.kind = NelderMead{};
  ls.tol = 1e-10;
  ls.x_tol = 1e-8;
  ls.max_iterations = 20'000;
  ls.restarts = 10;
  return ls;
}

HybridConfig default_hybrid_config() {
  HybridConfig c;
  c.sa = default_hybrid_sa();
  c.ls = default_hybrid_ls();
  return c;
}

void validate(const HybridConfig& c) {
  validate(c.sa);
  validate(c.ls);
  require(c.improvement_threshold > 0.0, "hybrid: improvement_threshold must be > 0");
  require(c.max_rounds >= 1, "hybrid: max_rounds must be >= 1");
  require(c.max_evaluations >= 1, "hybrid: max_evaluations must be >= 1");
}

RunRecord run_hybrid_ls_sa(const Problem& problem, const HybridConfig& config) {
  validate(config);
  const auto start = Clock::now();
  Rng rng(config.seed);
  Evaluator eval(problem, config.max_evaluations);

  RunRecord rec;
  rec.problem = problem.name();
  rec.method = "hybrid";
  rec.seed = config.seed;
  rec.stop_reason = StopReason::objective;

  Vector x = config.sa.x0 ? *config.sa.x0 : random_feasible(problem, rng);
  rec.x_best = x;
  rec.f_best = eval(x);
  std::optional<double> t0;

  for (int round = 0; round < config.max_rounds; ++round) {
    if (eval.exhausted()) {
      rec.stop_reason = StopReason::max_evaluations;
      break;
    }
    LocalSearchSpec ls = config.ls;
    ls.seed = substream_seed(config.seed, 1, static_cast<std::uint64_t>(round));
    const LocalResult local = local_search(ls, eval, rec.x_best);
    const double f_best_local = local.f_star;
    if (f_best_local < rec.f_best) {
      rec.f_best = f_best_local;
      rec.x_best = local.x_star;
    }
    rec.phases.push_back({2 * round, "local", rec.f_best, eval.count()});
    if (eval.exhausted()) {
      rec.stop_reason = StopReason::max_evaluations;
      break;
    }

    AnnealConfig phase = config.sa;
    phase.x0 = local.x_star;
    phase.seed = config.seed;
    phase.record_trace = config.record_trace;
    phase.max_evaluations = std::min(config.sa.max_evaluations, eval.remaining());
    const RunRecord sa = anneal(problem, phase, eval, rng, t0);
    t0 = sa.t0;
    rec.t0 = sa.t0;
    rec.outer_iterations += sa.outer_iterations;
    rec.stop_reason = sa.stop_reason;
    for (const auto& [key, value] : sa.counters) rec.counters[key] += value;
    if (config.record_trace) rec.trace.insert(rec.trace.end(), sa.trace.begin(), sa.trace.end());
    if (sa.f_best < rec.f_best) {
      rec.f_best = sa.f_best;
      rec.x_best = sa.x_best;
    }
    rec.phases.push_back({2 * round + 1, "anneal", rec.f_best, eval.count()});
    rec.counters["rounds"] = round + 1;
    if (!(rec.f_best - f_best_local <= -config.improvement_threshold)) break;
  }

  rec.x_final = rec.x_best;
  rec.f_final = rec.f_best;
  rec.evaluations = eval.count();
  rec.wall_seconds = seconds_since(start);
  return rec;
}

// ---- Evolution strategies -------------------------------------------------

AnnealConfig default_embedded_sa() {
  AnnealConfig sa;
  sa.init_temp = KirkpatrickInit{};
  sa.cooling = Geometric{0.5};
  sa.move = SingleCoordinate{};
  sa.n_size_per_dim = 1;
  sa.n_factor = 1;
  sa.max_outer = 20;
  sa.max_evaluations = 20'000;
  return sa;
}

EvoConfig default_evo_config() {
  EvoConfig c;
  c.sa_budget = default_embedded_sa();
  return c;
}

void validate(const EvoConfig& c, bool recombination) {
  if (recombination) {
    require(c.mu >= 2, "evo: mu must be >= 2 for recombination");
    require(c.lambda >= c.mu, "evo: lambda must be >= mu");
  } else {
    require(c.mu >= 1, "evo: mu must be >= 1");
  }
  require(c.zeta >= 1, "evo: zeta must be >= 1");
  if (c.tau) require(*c.tau > 0.0, "evo: tau must be > 0");
  if (c.tau_prime) require(*c.tau_prime > 0.0, "evo: tau_prime must be > 0");
  require(c.sigma0 > 0.0, "evo: sigma0 must be > 0");
  require(c.generations >= 1, "evo: generations must be >= 1");
  require(c.max_evaluations >= 1, "evo: max_evaluations must be >= 1");
  if (c.sa_budget) validate(*c.sa_budget);
}

double default_tau(Index n) {
  return 1.0 / std::sqrt(2.0 * std::sqrt(static_cast<double>(n)));
}

double default_tau_prime(Index n) { return 1.0 / std::sqrt(2.0 * static_cast<double>(n)); }

Individual mutate_with_draws(const Individual& ind, double tau, double tau_prime,
                             double global_draw, const Vector& coordinate_draws) {
  Individual child = ind;
  child.x = ind.x + ind.sigma.cwiseProduct(coordinate_draws);
  child.sigma = ind.sigma.array() * (tau_prime * global_draw + tau * coordinate_draws.array()).exp();
  child.sigma = child.sigma.cwiseMax(std::numeric_limits<double>::min());
  child.fitness = std::numeric_limits<double>::quiet_NaN();
  return child;
}

Individual mutate(const Problem& problem, const Individual& ind, double tau, double tau_prime,
                  Rng& rng) {
  const double global = standard_normal(rng);
  Vector draws(ind.x.size());
  for (Index i = 0; i < draws.size(); ++i) draws[i] = standard_normal(rng);
  Individual child = mutate_with_draws(ind, tau, tau_prime, global, draws);
  child.x = repair(problem, child.x);
  return child;
}

Individual recombine_with_coins(const Individual& p1, const Individual& p2,
                                const std::vector<bool>& take_first) {
  require(p1.x.size() == p2.x.size(), "recombine: parents differ in dimension");
  require(static_cast<Index>(take_first.size()) == p1.x.size(), "recombine: one coin per axis");
  Individual child = p1;
  for (Index i = 0; i < p1.x.size(); ++i) {
    const Individual& src = take_first[static_cast<std::size_t>(i)] ? p1 : p2;
    child.x[i] = src.x[i];
    child.sigma[i] = src.sigma[i];
  }
  child.fitness = std::numeric_limits<double>::quiet_NaN();
  return child;
}

Individual recombine_discrete(const Individual& p1, const Individual& p2, Rng& rng) {
  std::vector<bool> coins(static_cast<std::size_t>(p1.x.size()));
  for (std::size_t i = 0; i < coins.size(); ++i) coins[i] = uniform01(rng) < 0.5;
  return recombine_with_coins(p1, p2, coins);
}

std::vector<int> tournament_scores(const std::vector<double>& fitness, int zeta, Rng& rng) {
  const auto size = static_cast<Index>(fitness.size());
  std::vector<int> wins(fitness.size(), 0);
  if (size < 2) return wins;
  for (Index i = 0; i < size; ++i) {
    for (int z = 0; z < zeta; ++z) {
      Index j = uniform_index(rng, size - 1);
      if (j >= i) ++j;
      if (fitness[static_cast<std::size_t>(i)] < fitness[static_cast<std::size_t>(j)]) {
        ++wins[static_cast<std::size_t>(i)];
      }
    }
  }
  return wins;
}

namespace {

class Evolution {
 public:
  Evolution(const Problem& problem, const EvoConfig& config, std::string method)
      : problem_(problem), config_(config), eval_(problem, config.max_evaluations),
        rng_(config.seed), tau_(config.tau.value_or(default_tau(problem.dim()))),
        tau_prime_(config.tau_prime.value_or(default_tau_prime(problem.dim()))) {
    result_.record.problem = problem.name();
    result_.record.method = std::move(method);
    result_.record.seed = config.seed;
    result_.record.f_best = std::numeric_limits<double>::infinity();
  }

  EvoResult run(bool saes) {
    const auto start = Clock::now();
    try {
      initialize();
      for (generation_ = 1; generation_ <= config_.generations; ++generation_) {
        if (done()) break;
        if (saes) {
          saes_generation();
        } else {
          sacep_generation();
        }
        snapshot();
      }
      stop_ = done() ? stop_ : StopReason::max_outer;
    } catch (const BudgetExhausted&) {
      stop_ = StopReason::max_evaluations;
    }
    RunRecord& rec = result_.record;
    rec.stop_reason = stop_;
    rec.x_final = rec.x_best;
    rec.f_final = rec.f_best;
    rec.evaluations = eval_.count();
    rec.outer_iterations = std::min(generation_, config_.generations);
    rec.counters["generations"] = rec.outer_iterations;
    rec.wall_seconds = seconds_since(start);
    return result_;
  }

 private:
  void consider(const Individual& ind) {
    if (ind.fitness < result_.record.f_best) {
      result_.record.f_best = ind.fitness;
      result_.record.x_best = ind.x;
    }
  }

  bool done() {
    if (eval_.exhausted()) {
      stop_ = StopReason::max_evaluations;
      return true;
    }
    if (reached(problem_, result_.record.f_best, config_.objective_tolerance)) {
      stop_ = StopReason::objective;
      return true;
    }
    return false;
  }

  void refine(Individual& ind, std::uint64_t index) {
    if (!config_.sa_budget || eval_.remaining() < 1) return;
    AnnealConfig sa = *config_.sa_budget;
    sa.x0 = ind.x;
    sa.seed = substream_seed(config_.seed, static_cast<std::uint64_t>(generation_), index);
    sa.max_evaluations = std::min(sa.max_evaluations, eval_.remaining());
    Rng rng(sa.seed);
    const RunRecord r = anneal(problem_, sa, eval_, rng, t0_);
    t0_ = r.t0;
    ++result_.record.counters["sa_calls"];
    if (r.f_best < ind.fitness) {
      ind.x = r.x_best;
      ind.fitness = r.f_best;
    }
    consider(ind);
  }

  void initialize() {
    generation_ = 0;
    const Vector width = problem_.scale();
    parents_.clear();
    for (int k = 0; k < config_.mu; ++k) {
      Individual ind;
      ind.x = random_feasible(problem_, rng_);
      ind.sigma = config_.sigma0 * width;
      ind.fitness = eval_(ind.x);
      consider(ind);
      parents_.push_back(ind);
    }
    for (int k = 0; k < config_.mu; ++k) refine(parents_[static_cast<std::size_t>(k)], k);
    snapshot();
  }

  Individual child_from(const Individual& base, Rng& rng) {
    Individual child = mutate(problem_, base, tau_, tau_prime_, rng);
    child.fitness = eval_(child.x);
    consider(child);
    return child;
  }

  void saes_generation() {
    std::vector<Individual> pool = parents_;
    const auto mu = static_cast<Index>(parents_.size());
    for (int c = 0; c < config_.lambda; ++c) {
      Rng rng(substream_seed(config_.seed, static_cast<std::uint64_t>(generation_),
                             1'000'000ULL + static_cast<std::uint64_t>(c)));
      const Index a = uniform_index(rng, mu);
      Index b = uniform_index(rng, mu - 1);
      if (b >= a) ++b;
      const Individual mix = recombine_discrete(parents_[static_cast<std::size_t>(a)],
                                                parents_[static_cast<std::size_t>(b)], rng);
      pool.push_back(child_from(mix, rng));
    }
    std::stable_sort(pool.begin(), pool.end(), [](const Individual& l, const Individual& r) {
      return l.fitness < r.fitness;
    });
    pool.resize(static_cast<std::size_t>(config_.mu));
    parents_ = std::move(pool);
    refine(parents_.front(), 0);
  }

  void sacep_generation() {
    std::vector<Individual> pool = parents_;
    for (std::size_t k = 0; k < parents_.size(); ++k) {
      Rng rng(substream_seed(config_.seed, static_cast<std::uint64_t>(generation_),
                             1'000'000ULL + k));
      pool.push_back(child_from(parents_[k], rng));
    }
    std::vector<double> fitness;
    for (const auto& ind : pool) fitness.push_back(ind.fitness);
    Rng trng(substream_seed(config_.seed, static_cast<std::uint64_t>(generation_), 2'000'000ULL));
    const std::vector<int> wins = tournament_scores(fitness, config_.zeta, trng);
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
      if (wins[l] != wins[r]) return wins[l] > wins[r];
      return fitness[l] < fitness[r];
    });
    std::vector<Individual> next;
    for (int k = 0; k < config_.mu; ++k) next.push_back(pool[idx[static_cast<std::size_t>(k)]]);
    parents_ = std::move(next);
    if (!config_.sa_parents_once) {
      for (std::size_t k = 0; k < parents_.size(); ++k) refine(parents_[k], k);
    } else {
      auto best = std::min_element(parents_.begin(), parents_.end(),
                                   [](const Individual& l, const Individual& r) {
                                     return l.fitness < r.fitness;
                                   });
      refine(*best, static_cast<std::uint64_t>(best - parents_.begin()));
    }
  }

  void snapshot() {
    if (!config_.record_population) return;
    for (std::size_t k = 0; k < parents_.size(); ++k) {
      result_.population.push_back({generation_, static_cast<int>(k), parents_[k].fitness,
                                    parents_[k].sigma.mean()});
    }
  }

  const Problem& problem_;
  const EvoConfig& config_;
  Evaluator eval_;
  Rng rng_;
  double tau_;
  double tau_prime_;
  std::optional<double> t0_;
  std::vector<Individual> parents_;
  int generation_ = 0;
  StopReason stop_ = StopReason::max_outer;
  EvoResult result_;
};

}  // namespace

EvoResult run_sa_saes(const Problem& problem, const EvoConfig& config) {
  validate(config, true);
  Evolution evo(problem, config, config.sa_budget ? "sa-saes" : "saes");
  return evo.run(true);
}

EvoResult run_sa_sacep(const Problem& problem, const EvoConfig& config) {
  validate(config, false);
  Evolution evo(problem, config, config.sa_budget ? "sa-sacep" : "sacep");
  return evo.run(false);
}

std::string population_csv(const std::vector<PopulationRow>& rows) {
  std::ostringstream out;
  out.precision(12);
  out << "generation,index,f,mean_sigma\n";
  for (const auto& r : rows) {
    out << r.generation << ',' << r.index << ',' << r.f << ',' << r.mean_sigma << '\n';
  }
  return out.str();
}

}  // namespace anneal
