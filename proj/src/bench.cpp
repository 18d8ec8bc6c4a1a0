#include "anneal/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>

namespace anneal {

namespace {

std::string problem_key(const std::string& name, Index dim) {
  return name + "#" + std::to_string(dim);
}

}  // namespace

Summary aggregate(std::span<const double> values, double delta) {
  if (values.empty()) throw ConfigError("aggregate: empty sample");
  require(delta >= 0.0, "aggregate: delta must be >= 0");
  Summary s;
  s.best = *std::min_element(values.begin(), values.end());
  const double tol = delta * std::max(std::abs(s.best), 1.0);
  std::size_t hits = 0;
  double sum = 0.0;
  for (double v : values) {
    if (std::abs(v - s.best) <= tol) ++hits;
    sum += v;
  }
  const auto n = static_cast<double>(values.size());
  s.frequency = static_cast<double>(hits) / n;
  s.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / (n - 1.0);
  }
  return s;
}

double performance_ratio(double t, double t_min, double o, double b, double delta,
                         double rho_max) {
  require(t > 0.0 && t_min > 0.0, "performance_ratio: resources must be positive");
  require(rho_max >= 1.0, "performance_ratio: rho_max must be >= 1");
  const double scale = b == 0.0 ? 1.0 : b;
  if (std::abs((o - b) / scale) <= delta) return t / t_min;
  return rho_max;
}

PerformanceProfile performance_profile(const std::map<std::string, std::vector<double>>& ratios,
                                       std::span<const double> grid) {
  PerformanceProfile out;
  std::optional<std::size_t> n_p;
  for (const auto& [solver, r] : ratios) {
    if (n_p && *n_p != r.size()) throw ConfigError("performance_profile: ragged ratio lists");
    n_p = r.size();
  }
  if (!n_p || *n_p == 0) throw ConfigError("performance_profile: no ratios");
  for (const auto& [solver, r] : ratios) {
    out.solvers.push_back(solver);
    out.ratios[solver] = r;
    auto& curve = out.curves[solver];
    for (double tau : grid) {
      const auto count = std::count_if(r.begin(), r.end(), [&](double v) { return v <= tau; });
      curve.push_back({tau, static_cast<double>(count) / static_cast<double>(*n_p)});
    }
  }
  return out;
}

std::vector<double> tau_grid(double rho_max, int points) {
  require(rho_max >= 1.0, "tau_grid: rho_max must be >= 1");
  require(points >= 2, "tau_grid: need at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double top = std::log(rho_max);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(top * i / (points - 1));
  }
  grid.front() = 1.0;
  grid.back() = rho_max;
  return grid;
}

BenchmarkReport run_trials(const std::vector<Problem>& problems,
                           const std::vector<SolverEntry>& solvers, int reps,
                           std::uint64_t base_seed, int jobs, double delta) {
  require(reps >= 1, "run_trials: reps must be >= 1");
  require(jobs >= 1, "run_trials: jobs must be >= 1");
  BenchmarkReport report;
  report.delta = delta;
  for (const auto& p : problems) {
    for (const auto& s : solvers) {
      for (int r = 0; r < reps; ++r) {
        Trial t;
        t.problem = p.name();
        t.dim = p.dim();
        t.solver = s.name;
        t.rep = r;
        t.seed = base_seed + static_cast<std::uint64_t>(r);
        report.trials.push_back(std::move(t));
      }
    }
  }

  const std::size_t per_problem = solvers.size() * static_cast<std::size_t>(reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < report.trials.size(); i = next++) {
      Trial& t = report.trials[i];
      const Problem& p = problems[i / per_problem];
      const SolverEntry& s = solvers[(i % per_problem) / static_cast<std::size_t>(reps)];
      try {
        t.record = s.run(p, t.seed);
        t.record.seed = t.seed;
        if (!std::isfinite(t.record.f_best)) {
          t.failed = true;
          t.error = "non-finite f_best";
        }
      } catch (const std::exception& e) {
        t.failed = true;
        t.error = e.what();
      }
    }
  };
  const int threads = std::min<int>(jobs, static_cast<int>(report.trials.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < threads; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  report.rows = summarize(report.trials, delta);
  return report;
}

std::vector<ReportRow> summarize(const std::vector<Trial>& trials, double delta) {
  using Key = std::tuple<std::string, Index, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<const Trial*>> groups;
  for (const auto& t : trials) {
    Key k{t.problem, t.dim, t.solver};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) order.push_back(k);
    it->second.push_back(&t);
  }
  std::vector<ReportRow> rows;
  for (const auto& k : order) {
    const auto& group = groups[k];
    ReportRow row;
    std::tie(row.problem, row.dim, row.solver) = k;
    row.reps = static_cast<int>(group.size());
    std::vector<double> values;
    double evals = 0.0;
    double secs = 0.0;
    for (const Trial* t : group) {
      if (t->failed) {
        ++row.failures;
        continue;
      }
      values.push_back(t->record.f_best);
      evals += static_cast<double>(t->record.evaluations);
      secs += t->record.wall_seconds;
    }
    if (values.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.best = row.mean = row.variance = nan;
    } else {
      const Summary s = aggregate(values, delta);
      row.best = s.best;
      row.frequency = s.frequency;
      row.mean = s.mean;
      row.variance = s.variance;
      row.mean_evals = evals / static_cast<double>(values.size());
      row.mean_seconds = secs / static_cast<double>(values.size());
    }
    rows.push_back(row);
  }
  return rows;
}

RatioTable ratios_from_trials(const std::vector<Trial>& trials, double delta,
                              std::optional<double> rho_max) {
  RatioTable table;
  std::vector<std::string> solvers;
  struct Cell {
    double o = std::numeric_limits<double>::infinity();
    double evals = 0.0;
    int ok = 0;
  };
  std::map<std::string, std::map<std::string, Cell>> cells;
  for (const auto& t : trials) {
    const std::string key = problem_key(t.problem, t.dim);
    if (std::find(table.problems.begin(), table.problems.end(), key) == table.problems.end()) {
      table.problems.push_back(key);
    }
    if (std::find(solvers.begin(), solvers.end(), t.solver) == solvers.end()) {
      solvers.push_back(t.solver);
    }
    Cell& c = cells[key][t.solver];
    if (t.failed || !std::isfinite(t.record.f_best)) continue;
    c.o = std::min(c.o, t.record.f_best);
    c.evals += static_cast<double>(std::max<long long>(t.record.evaluations, 1));
    ++c.ok;
  }
  if (table.problems.empty()) throw ConfigError("ratios: no records");

  // Successful ratios first, to size rho_max.
  std::map<std::string, std::vector<std::optional<double>>> raw;
  double largest = 1.0;
  for (const auto& p : table.problems) {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& s : solvers) b = std::min(b, cells[p][s].o);
    const double scale = b == 0.0 ? 1.0 : b;
    auto matched = [&](const Cell& c) {
      return c.ok > 0 && std::isfinite(b) && std::abs((c.o - b) / scale) <= delta;
    };
    double t_min = std::numeric_limits<double>::infinity();
    for (const auto& s : solvers) {
      const Cell& c = cells[p][s];
      if (matched(c)) t_min = std::min(t_min, c.evals / c.ok);
    }
    for (const auto& s : solvers) {
      const Cell& c = cells[p][s];
      if (matched(c)) {
        const double r = (c.evals / c.ok) / t_min;
        largest = std::max(largest, r);
        raw[s].push_back(r);
      } else {
        raw[s].push_back(std::nullopt);
      }
    }
  }
  table.rho_max = rho_max ? *rho_max : std::max(100.0, 2.0 * largest);
  for (const auto& s : solvers) {
    auto& out = table.ratios[s];
    for (const auto& r : raw[s]) out.push_back(r ? std::min(*r, table.rho_max) : table.rho_max);
  }
  return table;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out.precision(12);
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.problem << ',' << r.dim << ',' << r.solver << ',' << r.reps << ',' << r.best << ','
        << r.frequency << ',' << r.mean << ',' << r.variance << ',' << r.mean_evals << ','
        << r.mean_seconds << '\n';
  }
  return out.str();
}

std::string profile_csv(const PerformanceProfile& profile) {
  std::ostringstream out;
  out.precision(12);
  out << "solver,tau,p\n";
  for (const auto& s : profile.solvers) {
    for (const auto& pt : profile.curves.at(s)) out << s << ',' << pt.tau << ',' << pt.p << '\n';
  }
  return out.str();
}

}  // namespace anneal
