// Acceptance experiments. Prints one PASS/FAIL line per criterion, with
// indented detail lines underneath.
//
//   acceptance [--strict] [--only 1,3,...] [--jobs N]
//
// Exits 0 once every selected criterion has run. With --strict the exit code
// is 1 if any of them failed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "anneal/acceptance.hpp"
#include "anneal/bench.hpp"
#include "anneal/engine.hpp"
#include "anneal/hybrid.hpp"
#include "anneal/local_search.hpp"
#include "anneal/suite.hpp"
#include "anneal/temperature.hpp"

using namespace anneal;

namespace {

int g_jobs = 1;

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const auto workers = static_cast<std::size_t>(std::max(1, g_jobs));
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void fail(const std::string& why) {
    pass = false;
    details.push_back(why);
  }
  void note(const std::string& what) { details.push_back(what); }
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

bool hit(double f, double f_opt) {
  return std::fabs(f - f_opt) <= 1e-3 * std::max(1.0, std::fabs(f_opt));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

const std::vector<SuiteEntry>& suite() {
  static const auto s = make_standard_suite();
  return s;
}

// 1. Hybrid on the gated subset, 20 seeds, 80% hits per problem.
Outcome known_optima() {
  Outcome out;
  const auto cases = gated_subset();
  constexpr int kSeeds = 20;
  std::vector<double> f(cases.size() * kSeeds);
  std::vector<long long> evals(f.size());
  parallel_for(f.size(), [&](std::size_t i) {
    const auto& c = cases[i / kSeeds];
    HybridConfig cfg = default_hybrid_config();
    cfg.max_evaluations = 500'000;
    cfg.seed = i % kSeeds;
    const RunRecord r = run_hybrid_ls_sa(find_entry(suite(), c.name).problem(c.dim), cfg);
    f[i] = r.f_best;
    evals[i] = r.evaluations;
  });
  int passed = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const double f_opt = *find_entry(suite(), c.name).optimum(c.dim);
    int hits = 0;
    double best = std::numeric_limits<double>::infinity();
    long long max_evals = 0;
    for (int s = 0; s < kSeeds; ++s) {
      const double v = f[k * kSeeds + s];
      hits += hit(v, f_opt) ? 1 : 0;
      best = std::min(best, v);
      max_evals = std::max(max_evals, evals[k * kSeeds + s]);
    }
    if (max_evals > 500'000) out.fail(c.name + "(" + std::to_string(c.dim) + ") over budget");
    if (hits * 5 >= kSeeds * 4) {
      ++passed;
    } else {
      out.fail(c.name + "(" + std::to_string(c.dim) + "): " + std::to_string(hits) + "/" +
               std::to_string(kSeeds) + " hits, best " + fmt(best, 10) + ", f_opt " +
               fmt(f_opt, 10));
    }
  }
  out.note(std::to_string(passed) + "/" + std::to_string(cases.size()) +
           " problems at >= 80% hits");
  return out;
}

// 2. SA-SAES and SA-SACEP spot checks plus the embedded-SA comparison.
Outcome evolution() {
  Outcome out;
  struct Case {
    std::string name;
    Index dim;
    double target;
  };
  const std::vector<Case> cases = {{"Easom", 2, -1.0},
                                   {"Hartman-6", 6, -3.32237},
                                   {"Branin", 2, 0.397887},
                                   {"Step", 5, 0.0},
                                   {"Levy Nr.2", 5, 0.0}};
  const std::vector<std::string> methods = {"sa-saes", "sa-sacep"};
  constexpr int kSeeds = 10;
  // [method][case][with_sa][seed]
  const std::size_t total = methods.size() * cases.size() * 2 * kSeeds;
  std::vector<double> f(total);
  std::vector<long long> evals(total);
  parallel_for(total, [&](std::size_t i) {
    const std::size_t seed = i % kSeeds;
    const bool with_sa = (i / kSeeds) % 2 == 0;
    const std::size_t c = (i / (2 * kSeeds)) % cases.size();
    const std::size_t m = i / (2 * kSeeds * cases.size());
    EvoConfig cfg = default_evo_config();
    cfg.seed = seed;
    cfg.max_evaluations = 100'000;
    if (!with_sa) cfg.sa_budget.reset();
    const Problem p = find_entry(suite(), cases[c].name).problem(cases[c].dim);
    const EvoResult r = m == 0 ? run_sa_saes(p, cfg) : run_sa_sacep(p, cfg);
    f[i] = r.record.f_best;
    evals[i] = r.record.evaluations;
  });
  for (std::size_t m = 0; m < methods.size(); ++m) {
    int better = 0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const std::size_t base = (m * cases.size() + c) * 2 * kSeeds;
      std::vector<double> with(f.begin() + base, f.begin() + base + kSeeds);
      std::vector<double> without(f.begin() + base + kSeeds, f.begin() + base + 2 * kSeeds);
      int hits = 0;
      for (int s = 0; s < kSeeds; ++s) {
        hits += hit(with[s], cases[c].target) ? 1 : 0;
        if (evals[base + s] > 100'000) out.fail(methods[m] + " " + cases[c].name + " over budget");
      }
      const std::string label = methods[m] + " " + cases[c].name + "(" +
                                std::to_string(cases[c].dim) + ")";
      if (hits * 10 < kSeeds * 7) {
        out.fail(label + ": " + std::to_string(hits) + "/" + std::to_string(kSeeds) + " hits");
      }
      const double mw = median(with);
      const double mb = median(without);
      better += mw <= mb ? 1 : 0;
      out.note(label + ": " + std::to_string(hits) + "/" + std::to_string(kSeeds) +
               " hits, median " + fmt(mw, 8) + " vs " + fmt(mb, 8) + " without SA");
    }
    out.note(methods[m] + ": median with SA <= without on " + std::to_string(better) +
             "/5 (target 4)");
    if (better < 3) out.fail(methods[m] + ": embedded SA median better on only " +
                             std::to_string(better) + "/5");
  }
  return out;
}

// 3. Iterated cool() against closed_form(), and the hand examples.
Outcome schedules() {
  Outcome out;
  Rng rng(303);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double t0 = std::exp(uniform(rng, -5.0, 7.0));
    const ScheduleSpec g{Geometric{uniform(rng, 0.5, 0.9999)}, t0, {}};
    const ScheduleSpec l{LundyMees{std::exp(uniform(rng, -12.0, 0.0))}, t0, {}};
    double tg = t0;
    double tl = t0;
    for (long long k = 1; k <= 10'000; ++k) {
      tg = cool(g, tg, k - 1);
      tl = cool(l, tl, k - 1);
      const double cg = closed_form(g, k);
      // Relative error is only meaningful for normal doubles.
      if (cg >= std::numeric_limits<double>::min()) worst = std::max(worst, std::fabs(tg / cg - 1));
      worst = std::max(worst, std::fabs(tl / closed_form(l, k) - 1));
    }
  }
  if (worst > 1e-12) out.fail("iterated vs closed form: relative error " + fmt(worst));
  out.note("max relative error " + fmt(worst, 3));

  struct Example {
    const char* label;
    double got;
    double want;
  };
  const std::vector<Example> examples = {
      {"geometric", cool({Geometric{0.95}, 100.0, {}}, 100.0, 0), 95.0},
      {"lundy_mees", cool({LundyMees{0.001}, 100.0, {}}, 100.0, 0), 90.9090909090909091},
      {"fast", cool({FastSchedule{}, 100.0, {}}, 100.0, 1), 50.0},
      {"vfsr", cool({Vfsr{1.0, 4.0}, 100.0, {}}, 100.0, 16), 13.5335283236612692},
      {"boltzmann", cool({Boltzmann{std::exp(1.0)}, 100.0, {}}, 100.0, 0), 100.0},
      {"power", cool({PowerSchedule{2.0}, 100.0, {}}, 100.0, 3), 50.0},
      {"closed geometric", closed_form({Geometric{0.9}, 10.0, {}}, 2), 8.1},
      {"closed lundy_mees", closed_form({LundyMees{0.001}, 100.0, {}}, 10), 50.0},
      {"johnson", johnson_temperature(5.0, 0.8), 22.4071005886227489},
      {"aarts", aarts_temperature(2.0, 40, 60, 0.8), 4.93260692475286337},
      {"maxdiff", maxdiff_temperature(10.0, 0.9), 94.9122158102990303},
  };
  for (const auto& e : examples) {
    if (!(std::fabs(e.got - e.want) <= 1e-9)) {
      out.fail(std::string(e.label) + ": " + fmt(e.got, 17) + " != " + fmt(e.want, 17));
    }
  }
  out.note(std::to_string(examples.size()) + " hand examples checked");
  return out;
}

// 4. Empirical acceptance frequencies and the exp lookup table.
Outcome acceptance_rules() {
  Outcome out;
  struct Rule {
    std::string label;
    AcceptanceSpec spec;
  };
  const std::vector<Rule> rules = {{"metropolis", {Metropolis{}, false}},
                                   {"metropolis/table", {Metropolis{}, true}},
                                   {"generalized(2,1)", {Generalized{2.0, 1.0}, false}},
                                   {"generalized(1,0.5)/table", {Generalized{1.0, 0.5}, true}},
                                   {"barker", {Barker{}, false}},
                                   {"johnson_linear", {JohnsonLinear{}, false}}};
  const std::vector<double> ratios = {0.0, 0.25, 1.0, 2.0, 4.0};
  const std::vector<double> temps = {1.0, 3.0};
  constexpr int kDraws = 1'000'000;
  const std::size_t total = rules.size() * ratios.size() * temps.size();
  std::vector<double> gap(total);
  parallel_for(total, [&](std::size_t i) {
    const auto& rule = rules[i / (ratios.size() * temps.size())];
    const double ratio = ratios[(i / temps.size()) % ratios.size()];
    const double t = temps[i % temps.size()];
    Rng rng(substream_seed(404, i));
    long long accepted = 0;
    for (int d = 0; d < kDraws; ++d) accepted += decide(rule.spec, ratio * t, t, rng) ? 1 : 0;
    gap[i] = std::fabs(static_cast<double>(accepted) / kDraws -
                       accept_probability(rule.spec, ratio * t, t));
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    worst = std::max(worst, gap[i]);
    if (gap[i] > 0.005) {
      out.fail(rules[i / (ratios.size() * temps.size())].label + " at delta/T " +
               fmt(ratios[(i / temps.size()) % ratios.size()]) + ": gap " + fmt(gap[i]));
    }
  }
  out.note("max empirical gap " + fmt(worst, 3) + " over " + std::to_string(total) + " cells");

  double table_err = 0.0;
  const ExpTable& table = exp_table();
  constexpr int kGrid = 4'000'000;
  for (int i = 0; i <= kGrid; ++i) {
    const double z = 25.0 * i / kGrid;
    table_err = std::max(table_err, std::fabs(table(z) - std::exp(-z)));
  }
  for (double z = 0.0; z <= 25.0; z += 1e-3) {
    const double exact = accept_probability({Metropolis{}, false}, z, 1.0);
    table_err = std::max(table_err, std::fabs(accept_probability({Metropolis{}, true}, z, 1.0) - exact));
  }
  if (table_err > 1e-4) out.fail("lookup table error " + fmt(table_err));
  out.note("lookup table max error " + fmt(table_err, 3));
  return out;
}

// 5. Engine invariants over short randomized runs.
Outcome engine_invariants() {
  Outcome out;
  constexpr std::size_t kRuns = 10'000;
  std::vector<std::string> problems(kRuns);
  parallel_for(kRuns, [&](std::size_t i) {
    const auto& entry = suite()[i % suite().size()];
    Rng pick(substream_seed(505, i));
    const Index dim = entry.dimensions[uniform_index(pick, static_cast<Index>(
                                                               std::min<std::size_t>(2, entry.dimensions.size())))];
    const Problem p = entry.problem(dim);
    AnnealConfig c;
    c.seed = i;
    c.record_trace = true;
    c.t0 = std::exp(uniform(pick, -3.0, 4.0));
    c.n_size = 4 + uniform_index(pick, 12);
    c.n_factor = 1 + uniform_index(pick, 4);
    c.max_evaluations = 100 + uniform_index(pick, 500);
    c.delta_threshold = i % 2 == 0 ? 0.0 : std::exp(uniform(pick, -9.0, 0.0));
    c.cooling = i % 3 == 0 ? CoolingLaw{LundyMees{0.05}} : CoolingLaw{Geometric{0.8}};
    switch (i % 4) {
      case 0: c.move = SingleCoordinate{}; break;
      case 1: c.move = RandomSubset{}; break;
      case 2: c.move = StepDirection{}; break;
      default: c.move = Gaussian{0.5}; break;
    }
    std::string why;
    auto check = [&](bool ok, const char* what) {
      if (!ok && why.empty()) why = what;
    };
    try {
      const RunRecord a = run_sa(p, c);
      const RunRecord b = run_sa(p, c);
      check(trace_csv(a.trace) == trace_csv(b.trace) && a.f_best == b.f_best &&
                a.x_best == b.x_best && a.counters == b.counters,
            "not deterministic");
      check(a.evaluations <= c.max_evaluations, "over budget");
      long long proposals = 0;
      long long renew = 0;
      double prev = std::numeric_limits<double>::infinity();
      for (const auto& row : a.trace) {
        check(row.f_best <= prev, "f_best increased");
        check(row.f_best <= row.f, "f_best above f");
        check(row.renew <= row.iteration_count, "renew above iteration_count");
        check(row.accepted == row.renew, "accepted != renew");
        proposals += row.iteration_count;
        renew += row.renew;
        prev = row.f_best;
      }
      check(a.evaluations == 1 + proposals, "evaluations != 1 + proposals");
      check(a.f_best <= a.f_final, "f_best above f_final");
      check(evaluate(p, a.x_best) == a.f_best, "f_best does not match x_best");
      const auto& k = a.counters;
      check(k.at("uphill_accepts") + k.at("downhill_accepts") <= renew, "accept counts");
      check(k.at("fast_path_accepts") <= k.at("downhill_proposals"), "fast path above downhill");
      check(k.at("downhill_accepts") == k.at("downhill_proposals"), "downhill rejected");
      check(k.at("strict_improvements") == k.at("fast_path_accepts"), "strict improvements");
      if (c.delta_threshold == 0.0) {
        check(k.at("fast_path_accepts") == k.at("downhill_proposals"), "fast path at delta 0");
      }
    } catch (const std::exception& e) {
      why = std::string("threw: ") + e.what();
    }
    if (!why.empty()) problems[i] = entry.name + "(" + std::to_string(dim) + ") run " +
                                    std::to_string(i) + ": " + why;
  });
  int failures = 0;
  for (const auto& s : problems) {
    if (s.empty()) continue;
    if (++failures <= 10) out.fail(s);
  }
  if (failures > 10) out.fail(std::to_string(failures) + " failing runs in total");
  out.note(std::to_string(kRuns) + " runs, each repeated for determinism");
  return out;
}

// 6. Nelder-Mead restarts on Hartman-3.
Outcome local_search_table() {
  Outcome out;
  const auto p = find_entry(suite(), "Hartman-3").problem(3);
  const TrialStatistics t = trial_statistics(LocalSearchSpec{}, p, 50, 2024);
  if (std::fabs(t.best - -3.862782) > 1e-5) out.fail("best " + fmt(t.best, 10));
  if (t.frequency < 0.4) out.fail("frequency " + fmt(t.frequency));
  out.note("best " + fmt(t.best, 10) + ", frequency " + fmt(100 * t.frequency, 3) +
           "% (reference simplex figure: 76%)");
  return out;
}

// 7. Performance profile properties.
Outcome profiles() {
  Outcome out;
  Rng rng(707);
  for (int trial = 0; trial < 200; ++trial) {
    const int solvers = 1 + static_cast<int>(uniform_index(rng, 5));
    const int problems = 1 + static_cast<int>(uniform_index(rng, 40));
    std::vector<Trial> trials;
    for (int p = 0; p < problems; ++p) {
      const double best = uniform(rng, -10, 10);
      for (int s = 0; s < solvers; ++s) {
        Trial t;
        t.problem = "p" + std::to_string(p);
        t.dim = 2;
        t.solver = "s" + std::to_string(s);
        t.failed = uniform01(rng) < 0.05;
        t.record.f_best = uniform01(rng) < 0.7 ? best : best + uniform(rng, 0.1, 5);
        t.record.evaluations = 1 + uniform_index(rng, 10000);
        trials.push_back(t);
      }
    }
    const RatioTable table = ratios_from_trials(trials, 1e-4);
    const auto prof = performance_profile(table.ratios, tau_grid(table.rho_max, 40));
    for (const auto& [s, curve] : prof.curves) {
      double prev = 0.0;
      for (const auto& pt : curve) {
        if (pt.p < prev || pt.p < 0.0 || pt.p > 1.0) {
          out.fail("curve not monotone in [0,1] for trial " + std::to_string(trial));
          break;
        }
        prev = pt.p;
      }
    }
  }

  std::vector<Trial> two(2);
  two[0].problem = two[1].problem = "p";
  two[0].solver = "a";
  two[1].solver = "b";
  two[0].record.f_best = two[1].record.f_best = 1.0;
  two[0].record.evaluations = 2;
  two[1].record.evaluations = 4;
  const RatioTable t = ratios_from_trials(two, 1e-4);
  if (t.ratios.at("a") != std::vector<double>{1.0} || t.ratios.at("b") != std::vector<double>{2.0}) {
    out.fail("two-solver case did not give ratios {1, 2}");
  }
  if (performance_ratio(4, 2, 0.5, 0.0, 1e-4, 100) != 100.0 ||
      performance_ratio(4, 2, 5e-5, 0.0, 1e-4, 100) != 2.0) {
    out.fail("zero-best rule");
  }
  out.note("200 random tables, constructed case, zero-best rule");
  return out;
}

// 8. aggregate() against a long double two-pass reference.
Outcome aggregation() {
  Outcome out;
  Rng rng(808);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto len = static_cast<std::size_t>(1 + uniform_index(rng, 3000));
    std::vector<double> v(len);
    const double scale = std::exp(uniform(rng, -8, 8));
    const double shift = uniform(rng, -100, 100) * scale;
    for (double& x : v) x = shift + scale * standard_normal(rng);
    if (trial % 4 == 0) {
      for (std::size_t i = 0; i < len; i += 3) v[i] = v[0];
    }
    long double sum = 0;
    double best = v[0];
    for (double x : v) {
      sum += x;
      best = std::min(best, x);
    }
    const long double mean = sum / static_cast<long double>(len);
    long double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double var = len > 1 ? static_cast<double>(ss / static_cast<long double>(len - 1)) : 0.0;
    const double tol = 1e-4 * std::max(1.0, std::fabs(best));
    std::size_t hits = 0;
    for (double x : v) hits += std::fabs(x - best) <= tol ? 1 : 0;

    const Summary s = aggregate(v, 1e-4);
    const double e_mean = std::fabs(s.mean - static_cast<double>(mean)) /
                          std::max(1.0, std::fabs(static_cast<double>(mean)));
    const double e_var = std::fabs(s.variance - var) / std::max(1.0, var);
    worst = std::max({worst, e_mean, e_var});
    if (s.best != best || s.frequency != static_cast<double>(hits) / static_cast<double>(len) ||
        e_mean > 1e-12 || e_var > 1e-12) {
      out.fail("list " + std::to_string(trial) + " differs");
    }
  }
  out.note("1000 lists, max relative error " + fmt(worst, 3));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::set<int> only;
  g_jobs = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) only.insert(std::stoi(item));
    } else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) {
      g_jobs = std::max(1, std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--strict] [--only 1,2,...] [--jobs N]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"known optima, hybrid on the gated subset", known_optima},
      {"SA-SAES / SA-SACEP spot checks", evolution},
      {"schedule exactness", schedules},
      {"acceptance-rule empirics", acceptance_rules},
      {"engine invariants", engine_invariants},
      {"Nelder-Mead on Hartman-3", local_search_table},
      {"performance-profile properties", profiles},
      {"aggregation oracle", aggregation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(number)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("threw: ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << ": "
              << criteria[i].first << '\n';
    for (const auto& d : o.details) std::cout << "    " << d << '\n';
    std::cout.flush();
  }
  return strict && failed > 0 ? 1 : 0;
}
