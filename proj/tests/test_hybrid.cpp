#include <gtest/gtest.h>

#include <cmath>

#include "anneal/hybrid.hpp"
#include "anneal/suite.hpp"

using namespace anneal;

namespace {

const std::vector<SuiteEntry>& suite() {
  static const auto s = make_standard_suite();
  return s;
}

Problem sphere(Index n) {
  return Problem("sphere", Box::uniform(n, -5, 5), [](const Vector& x) { return x.squaredNorm(); },
                 0.0, Vector::Zero(n));
}

Individual individual(std::initializer_list<double> x, std::initializer_list<double> s) {
  Individual ind;
  ind.x = Eigen::Map<const Vector>(x.begin(), static_cast<Index>(x.size()));
  ind.sigma = Eigen::Map<const Vector>(s.begin(), static_cast<Index>(s.size()));
  return ind;
}

HybridConfig hybrid(std::uint64_t seed) {
  HybridConfig c = default_hybrid_config();
  c.seed = seed;
  return c;
}

EvoConfig evo(std::uint64_t seed) {
  EvoConfig c = default_evo_config();
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Hybrid, SphereStopsAfterOneRound) {
  const RunRecord r = run_hybrid_ls_sa(sphere(3), hybrid(1));
  EXPECT_LE(r.f_best, 1e-6);
  EXPECT_EQ(r.counters.at("rounds"), 1);
  EXPECT_EQ(r.method, "hybrid");
}

TEST(Hybrid, Branin) {
  const RunRecord r = run_hybrid_ls_sa(find_entry(suite(), "Branin").problem(2), hybrid(3));
  EXPECT_NEAR(r.f_best, 0.397887, 1e-4);
}

TEST(Hybrid, ShubertOne) {
  const RunRecord r = run_hybrid_ls_sa(find_entry(suite(), "Shubert Nr.1").problem(2), hybrid(4));
  EXPECT_NEAR(r.f_best, -186.7309, 1e-3);
}

TEST(Hybrid, RoundsMonotoneAndBudgeted) {
  const auto p = find_entry(suite(), "Rastrigin").problem(3);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    HybridConfig c = hybrid(seed);
    c.max_evaluations = 60000;
    const RunRecord r = run_hybrid_ls_sa(p, c);
    EXPECT_LE(r.evaluations, c.max_evaluations);
    for (std::size_t i = 1; i < r.phases.size(); ++i) {
      EXPECT_LE(r.phases[i].f_best, r.phases[i - 1].f_best);
      EXPECT_GE(r.phases[i].evaluations, r.phases[i - 1].evaluations);
    }
  }
}

TEST(Hybrid, Deterministic) {
  const auto p = find_entry(suite(), "Goldstein-Price").problem(2);
  HybridConfig c = hybrid(8);
  c.max_evaluations = 50000;
  const RunRecord a = run_hybrid_ls_sa(p, c);
  const RunRecord b = run_hybrid_ls_sa(p, c);
  EXPECT_EQ(a.f_best, b.f_best);
  EXPECT_EQ(a.x_best, b.x_best);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Hybrid, Validation) {
  HybridConfig c = hybrid(0);
  c.improvement_threshold = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = hybrid(0);
  c.max_rounds = 0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Tau, Formulas) {
  EXPECT_DOUBLE_EQ(default_tau(4), 0.5);
  EXPECT_NEAR(default_tau_prime(4), 0.353553390593273762, 1e-15);
  for (Index n = 1; n <= 100; ++n) {
    const double dn = static_cast<double>(n);
    EXPECT_NEAR(default_tau(n), 1.0 / std::sqrt(2.0 * std::sqrt(dn)), 1e-12);
    EXPECT_NEAR(default_tau_prime(n), 1.0 / std::sqrt(2.0 * dn), 1e-12);
  }
}

TEST(Mutate, ZeroDrawsIsIdentity) {
  const Individual p = individual({1.0, -2.0, 3.0}, {0.1, 0.2, 0.3});
  const Individual c = mutate_with_draws(p, 0.5, 0.35, 0.0, Vector::Zero(3));
  EXPECT_EQ(c.x, p.x);
  EXPECT_EQ(c.sigma, p.sigma);
}

TEST(Mutate, UsesParentSigmaForX) {
  const Individual p = individual({1.0, 1.0}, {0.5, 2.0});
  Vector draws(2);
  draws << 1.0, -1.0;
  const Individual c = mutate_with_draws(p, 0.5, 0.25, 2.0, draws);
  EXPECT_DOUBLE_EQ(c.x[0], 1.5);
  EXPECT_DOUBLE_EQ(c.x[1], -1.0);
  EXPECT_NEAR(c.sigma[0], 0.5 * std::exp(0.25 * 2.0 + 0.5), 1e-15);
  EXPECT_NEAR(c.sigma[1], 2.0 * std::exp(0.25 * 2.0 - 0.5), 1e-15);
}

TEST(Mutate, SigmaStaysPositiveAndChildFeasible) {
  const auto p = find_entry(suite(), "Branin").problem(2);
  Rng rng(5);
  Individual ind = individual({0.0, 5.0}, {1.0, 1.0});
  for (int i = 0; i < 10000; ++i) {
    ind = mutate(p, ind, 2.0, 2.0, rng);
    ASSERT_TRUE((ind.sigma.array() > 0.0).all());
    ASSERT_TRUE(contains(p, ind.x));
  }
}

TEST(Recombine, ForcedCoins) {
  const Individual a = individual({1.0, 2.0}, {0.1, 0.2});
  const Individual b = individual({3.0, 4.0}, {0.3, 0.4});
  const Individual c = recombine_with_coins(a, b, {true, false});
  EXPECT_EQ(c.x[0], 1.0);
  EXPECT_EQ(c.sigma[0], 0.1);
  EXPECT_EQ(c.x[1], 4.0);
  EXPECT_EQ(c.sigma[1], 0.4);
}

TEST(Recombine, PairsTravelTogether) {
  const Individual a = individual({1.0, 2.0, 3.0, 4.0}, {0.1, 0.2, 0.3, 0.4});
  const Individual b = individual({5.0, 6.0, 7.0, 8.0}, {0.5, 0.6, 0.7, 0.8});
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Individual c = recombine_discrete(a, b, rng);
    for (Index i = 0; i < 4; ++i) {
      const bool from_a = c.x[i] == a.x[i] && c.sigma[i] == a.sigma[i];
      const bool from_b = c.x[i] == b.x[i] && c.sigma[i] == b.sigma[i];
      EXPECT_TRUE(from_a || from_b);
    }
  }
  const Individual same = recombine_discrete(a, a, rng);
  EXPECT_EQ(same.x, a.x);
  EXPECT_EQ(same.sigma, a.sigma);
}

TEST(Tournament, StrictBestWinsEveryBout) {
  const std::vector<double> f = {3.0, 1.0, 2.0, 5.0, 4.0};
  Rng rng(9);
  const auto wins = tournament_scores(f, static_cast<int>(f.size()), rng);
  EXPECT_EQ(wins[1], 5);
  EXPECT_EQ(wins[3], 0);
}

TEST(Evo, Validation) {
  EvoConfig c = evo(0);
  c.mu = 1;
  c.lambda = 1;
  EXPECT_THROW(run_sa_saes(sphere(2), c), ConfigError);
  c = evo(0);
  c.lambda = 5;
  EXPECT_THROW(validate(c, true), ConfigError);
  c = evo(0);
  c.zeta = 0;
  EXPECT_THROW(validate(c, false), ConfigError);
  c = evo(0);
  c.tau = -1.0;
  EXPECT_THROW(validate(c, false), ConfigError);
}

TEST(Evo, SaesElitism) {
  const auto p = find_entry(suite(), "Rastrigin").problem(3);
  EvoConfig c = evo(2);
  c.record_population = true;
  c.max_evaluations = 20000;
  const EvoResult r = run_sa_saes(p, c);
  std::map<int, double> best;
  for (const auto& row : r.population) {
    auto [it, fresh] = best.try_emplace(row.generation, row.f);
    if (!fresh) it->second = std::min(it->second, row.f);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [g, f] : best) {
    EXPECT_LE(f, prev) << "generation " << g;
    prev = f;
  }
  EXPECT_LE(r.record.evaluations, c.max_evaluations);
}

TEST(Evo, EmbeddedSaNeverHarms) {
  const auto p = find_entry(suite(), "Ackley").problem(2);
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    AnnealConfig sa = default_embedded_sa();
    sa.x0 = random_feasible(p, rng);
    sa.seed = static_cast<std::uint64_t>(i);
    EXPECT_LE(run_sa(p, sa).f_best, evaluate(p, *sa.x0));
  }
}

TEST(Evo, HartmanSixSaes) {
  const EvoResult r = run_sa_saes(find_entry(suite(), "Hartman-6").problem(6), evo(1));
  EXPECT_NEAR(r.record.f_best, -3.32237, 1e-3);
  EXPECT_LE(r.record.evaluations, 100000);
}

TEST(Evo, EasomSaes) {
  const EvoResult r = run_sa_saes(find_entry(suite(), "Easom").problem(2), evo(1));
  EXPECT_NEAR(r.record.f_best, -1.0, 1e-4);
}

TEST(Evo, StepSacep) {
  const EvoResult r = run_sa_sacep(find_entry(suite(), "Step").problem(5), evo(1));
  EXPECT_EQ(r.record.f_best, 0.0);
}

TEST(Evo, RastriginSacep) {
  const EvoResult r = run_sa_sacep(find_entry(suite(), "Rastrigin").problem(3), evo(1));
  EXPECT_LE(r.record.f_best, 1e-6);
}

TEST(Evo, DeterministicAndCsv) {
  const auto p = find_entry(suite(), "Branin").problem(2);
  EvoConfig c = evo(6);
  c.record_population = true;
  c.max_evaluations = 5000;
  const EvoResult a = run_sa_sacep(p, c);
  const EvoResult b = run_sa_sacep(p, c);
  EXPECT_EQ(a.record.f_best, b.record.f_best);
  EXPECT_EQ(population_csv(a.population), population_csv(b.population));
  const std::string csv = population_csv(a.population);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "generation,index,f,mean_sigma");
}
