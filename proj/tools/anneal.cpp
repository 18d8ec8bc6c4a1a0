// Command-line front end: list-problems, solve, bench, profile.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "anneal/bench.hpp"
#include "anneal/io.hpp"
#include "anneal/methods.hpp"
#include "anneal/suite.hpp"

namespace fs = std::filesystem;
using namespace anneal;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

// Top-level keys of a configuration file besides the method settings.
const std::vector<std::string> kRunKeys = {"problem", "dim", "method", "seed", "bench"};

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::find(kRunKeys.begin(), kRunKeys.end(), key) != kRunKeys.end() ||
                       std::find(kMethodKeys.begin(), kMethodKeys.end(), key) != kMethodKeys.end();
    if (!known) throw ConfigError("config: unknown key \"" + key + "\"");
  }
  return j;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const Json& config) {
  if (flag) return *flag;
  if (config.contains("seed")) {
    if (!config.at("seed").is_number_unsigned()) throw ConfigError("seed: expected an integer");
    return config.at("seed").get<std::uint64_t>();
  }
  if (const char* env = std::getenv("ANNEAL_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("ANNEAL_SEED is not an unsigned integer");
    }
  }
  return 0;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw SearchError("cannot write " + path.string());
  out << text;
}

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::string dims_text(const std::vector<Index>& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) out += (i ? "," : "") + std::to_string(dims[i]);
  return out;
}

std::string bounds_text(const Box& box) {
  const bool uniform = (box.lower.array() == box.lower[0]).all() &&
                       (box.upper.array() == box.upper[0]).all();
  if (uniform) return "[" + format_number(box.lower[0]) + ", " + format_number(box.upper[0]) + "]";
  std::string out;
  for (Index i = 0; i < box.lower.size(); ++i) {
    out += (i ? " x " : "") + std::string("[") + format_number(box.lower[i]) + ", " +
           format_number(box.upper[i]) + "]";
  }
  return out;
}

int cmd_list(const std::vector<std::string>& filters, bool as_json) {
  const auto suite = make_standard_suite();
  std::vector<SuiteEntry> chosen;
  if (filters.empty()) {
    chosen = suite;
  } else {
    for (const auto& f : filters) chosen.push_back(find_entry(suite, f));
  }
  if (as_json) {
    std::cout << catalog_json(chosen).dump(2) << '\n';
    return kOk;
  }
  std::cout << std::left << std::setw(18) << "name" << std::setw(10) << "n" << std::setw(24)
            << "bounds" << "f_opt\n";
  for (const auto& e : chosen) {
    for (Index n : e.dimensions) {
      const auto opt = e.optimum(n);
      std::cout << std::left << std::setw(18) << e.name << std::setw(10) << n << std::setw(24)
                << bounds_text(e.bounds(n)) << (opt ? format_number(*opt) : "-") << '\n';
    }
  }
  return kOk;
}

struct SolveArgs {
  std::string problem;
  std::optional<Index> dim;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::string trace;
};

int cmd_solve(const SolveArgs& args) {
  const Json config = load_config(args.config);
  std::string problem_name = args.problem;
  if (problem_name.empty() && config.contains("problem")) {
    problem_name = config.at("problem").get<std::string>();
  }
  if (problem_name.empty()) throw ConfigError("solve: --problem is required");
  std::string method = args.method;
  if (method.empty()) method = config.value("method", std::string("hybrid"));
  if (!is_method(method)) throw ConfigError("solve: unknown method \"" + method + "\"");

  const auto suite = make_standard_suite();
  const SuiteEntry& entry = find_entry(suite, problem_name);
  Index dim = 0;
  if (args.dim) {
    dim = *args.dim;
  } else if (config.contains("dim")) {
    dim = config.at("dim").get<Index>();
  } else if (entry.dimensions.size() == 1) {
    dim = entry.dimensions.front();
  } else {
    throw ConfigError("solve: --dim is required for " + entry.name + " (listed: " +
                      dims_text(entry.dimensions) + ")");
  }
  require(dim >= 1, "solve: --dim must be positive");
  const std::uint64_t seed = resolve_seed(args.seed, config);

  MethodSettings settings = method_settings_from_json(config);
  if (!args.trace.empty()) {
    settings.sa.record_trace = true;
    settings.hybrid.record_trace = true;
    settings.evo.record_population = true;
  }
  const Problem problem = entry.problem(dim);

  RunRecord record;
  std::string trace_text;
  if (method == "sa-saes" || method == "sa-sacep") {
    const EvoResult evo = run_evolution(method, problem, settings, seed);
    record = evo.record;
    trace_text = population_csv(evo.population);
  } else {
    record = make_solver(method, settings)(problem, seed);
    trace_text = trace_csv(record.trace);
  }
  record.seed = seed;

  if (!args.out.empty()) {
    Json effective = to_json(settings);
    effective["problem"] = entry.name;
    effective["dim"] = dim;
    effective["method"] = method;
    effective["seed"] = seed;
    Json doc = {{"record", to_json(record)}, {"config", effective}};
    write_file(args.out, doc.dump(2) + "\n");
  }
  if (!args.trace.empty()) write_file(args.trace, trace_text);

  std::cout << entry.name << " n=" << dim << " method=" << method << " seed=" << seed
            << " f_best=" << format_number(record.f_best) << " evals=" << record.evaluations
            << " stop_reason=" << to_string(record.stop_reason) << '\n';
  return kOk;
}

struct BenchArgs {
  std::string suite = "gated";
  std::string methods = "hybrid";
  int reps = 20;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "bench_out";
  std::string config;
  int jobs = 0;
  double delta = 1e-4;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_bench(const BenchArgs& args) {
  const Json config = load_config(args.config);
  const MethodSettings settings = method_settings_from_json(config);
  const std::uint64_t seed = resolve_seed(args.seed, config);
  require(args.reps >= 1, "bench: --reps must be >= 1");

  const auto suite = make_standard_suite();
  std::vector<Problem> problems;
  for (const auto& c : parse_selection(suite, args.suite)) {
    problems.push_back(find_entry(suite, c.name).problem(c.dim));
  }
  std::vector<SolverEntry> solvers;
  const auto methods = split_list(args.methods);
  if (methods.empty()) throw ConfigError("bench: --methods is empty");
  for (const auto& m : methods) solvers.push_back({m, make_solver(m, settings)});

  const int jobs = args.jobs > 0 ? args.jobs
                                 : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  const BenchmarkReport report = run_trials(problems, solvers, args.reps, seed, jobs, args.delta);

  const fs::path dir(args.out_dir);
  write_file(dir / "report.csv", report_csv(report.rows));
  std::string lines;
  for (const auto& t : report.trials) lines += to_json(t).dump() + "\n";
  write_file(dir / "records.jsonl", lines);
  Json effective = to_json(settings);
  effective["seed"] = seed;
  effective["bench"] = {{"suite", args.suite}, {"methods", methods}, {"reps", args.reps},
                        {"delta", args.delta}};
  write_file(dir / "config.json", effective.dump(2) + "\n");

  std::size_t failed = 0;
  for (const auto& t : report.trials) failed += t.failed ? 1 : 0;
  std::cout << "bench: " << report.rows.size() << " rows, " << report.trials.size() << " runs, "
            << failed << " failed; wrote " << dir.string() << '\n';
  if (failed > 0) {
    for (const auto& t : report.trials) {
      if (t.failed) std::cerr << t.problem << " n=" << t.dim << " " << t.solver << " rep " << t.rep
                              << ": " << t.error << '\n';
    }
  }
  return failed == report.trials.size() ? kRuntimeError : kOk;
}

struct ProfileArgs {
  std::string in;
  double delta = 1e-4;
  std::optional<double> rho_max;
  int tau_points = 50;
  std::string out;
};

int cmd_profile(const ProfileArgs& args) {
  std::ifstream in(args.in);
  if (!in) throw ConfigError("profile: cannot read " + args.in);
  std::vector<Trial> trials;
  std::vector<std::size_t> bad;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      trials.push_back(trial_from_json(Json::parse(line)));
    } catch (const std::exception&) {
      bad.push_back(number);
    }
  }
  if (!bad.empty()) {
    std::string list;
    for (std::size_t i = 0; i < bad.size(); ++i) list += (i ? "," : "") + std::to_string(bad[i]);
    throw ConfigError("profile: malformed record on line(s) " + list);
  }
  if (trials.empty()) throw ConfigError("profile: no records in " + args.in);
  require(args.tau_points >= 2, "profile: --tau-points must be >= 2");
  if (args.rho_max) require(*args.rho_max >= 1.0, "profile: --rho-max must be >= 1");

  const RatioTable table = ratios_from_trials(trials, args.delta, args.rho_max);
  const auto grid = tau_grid(table.rho_max, args.tau_points);
  const PerformanceProfile profile = performance_profile(table.ratios, grid);
  const std::string csv = profile_csv(profile);
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    write_file(args.out, csv);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated annealing toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> filters;
  bool as_json = false;
  auto* list = app.add_subcommand("list-problems", "Print the benchmark catalog");
  list->add_option("names", filters, "Only these functions");
  list->add_flag("--json", as_json, "JSON output");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one method on one problem");
  solve_cmd->add_option("--problem", solve.problem, "Function name");
  solve_cmd->add_option("--dim", solve.dim, "Dimension");
  solve_cmd->add_option("--method", solve.method, "sa|heating|memory|anneal-local|local-anneal|"
                                                  "hybrid|sa-saes|sa-sacep|nelder-mead|sds");
  solve_cmd->add_option("--seed", solve.seed, "Seed (default: config, then ANNEAL_SEED, then 0)");
  solve_cmd->add_option("--config", solve.config, "JSON configuration file");
  solve_cmd->add_option("--out", solve.out, "RunRecord JSON output");
  solve_cmd->add_option("--trace", solve.trace, "Trace (or population) CSV output");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Repeated trials and summary table");
  bench_cmd->add_option("--suite", bench.suite, "all, gated, or name[:n],...");
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated methods");
  bench_cmd->add_option("--reps", bench.reps, "Runs per problem and method");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory");
  bench_cmd->add_option("--config", bench.config, "JSON configuration file");
  bench_cmd->add_option("--jobs", bench.jobs, "Concurrent runs (default: logical cores)");
  bench_cmd->add_option("--delta", bench.delta, "Relative match threshold");

  ProfileArgs profile;
  auto* profile_cmd = app.add_subcommand("profile", "Performance profile from raw records");
  profile_cmd->add_option("--in", profile.in, "records.jsonl")->required();
  profile_cmd->add_option("--delta", profile.delta, "Relative match threshold");
  profile_cmd->add_option("--rho-max", profile.rho_max, "Failure ratio");
  profile_cmd->add_option("--tau-points", profile.tau_points, "Grid size");
  profile_cmd->add_option("--out", profile.out, "Profile CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*list) return cmd_list(filters, as_json);
    if (*solve_cmd) return cmd_solve(solve);
    if (*bench_cmd) return cmd_bench(bench);
    if (*profile_cmd) return cmd_profile(profile);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
