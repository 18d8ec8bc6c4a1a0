#include "anneal/temperature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "anneal/acceptance.hpp"

namespace anneal {

namespace {

struct WalkStats {
  double uphill_sum = 0.0;
  long long uphill = 0;
  long long downhill = 0;
};

WalkStats random_walk(Evaluator& eval, Rng& rng, const MoveSpec& move, int samples) {
  const Problem& p = eval.problem();
  MoveState state = initial_move_state(move);
  Vector x = random_feasible(p, rng);
  double f = eval(x);
  WalkStats w;
  for (int s = 0; s < samples; ++s) {
    Vector y = propose(move, state, x, p, rng);
    const double fy = eval(y);
    const double d = fy - f;
    if (d > 0.0) {
      w.uphill_sum += d;
      ++w.uphill;
    } else if (d < 0.0) {
      ++w.downhill;
    }
    x = std::move(y);
    f = fy;
  }
  return w;
}

std::vector<double> sample_values(Evaluator& eval, Rng& rng, int samples) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) v.push_back(eval(random_feasible(eval.problem(), rng)));
  return v;
}

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

double checked(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw SearchError(std::string(what) + ": initial temperature is not positive");
  }
  return t;
}

double kirkpatrick(const KirkpatrickInit& spec, Evaluator& eval, Rng& rng,
                   const MoveSpec& move) {
  // A flat sample gives no scale; any positive start works for the search.
  const double variance = sample_variance(sample_values(eval, rng, spec.samples));
  const double start = checked(variance > 0.0 ? variance : 1.0, "kirkpatrick (variance start)");
  const Problem& p = eval.problem();
  const AcceptanceSpec metropolis{};
  MoveState state = initial_move_state(move);
  Vector x = random_feasible(p, rng);
  double f = eval(x);
  double t = start;
  const double cap = kKirkpatrickCap * start;
  while (true) {
    long long accepted = 0;
    for (int s = 0; s < spec.samples; ++s) {
      Vector y = propose(move, state, x, p, rng);
      const double fy = eval(y);
      if (decide(metropolis, fy - f, t, rng)) {
        ++accepted;
        x = std::move(y);
        f = fy;
      }
    }
    const double rate = static_cast<double>(accepted) / spec.samples;
    if (rate >= spec.chi0) return t;
    if (t >= cap) return cap;
    t = std::min(t * spec.growth, cap);
  }
}

}  // namespace

void validate(const InitTempSpec& spec) {
  std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        require(s.samples >= 2, "init_temp: sample_count must be >= 2");
        if constexpr (std::is_same_v<S, KirkpatrickInit>) {
          require(s.chi0 > 0.0 && s.chi0 < 1.0, "kirkpatrick: chi0 must be in (0, 1)");
          require(s.growth > 1.0, "kirkpatrick: growth must be > 1");
        } else if constexpr (std::is_same_v<S, JohnsonInit>) {
          require(s.chi0 > 0.0 && s.chi0 < 1.0, "johnson: chi0 must be in (0, 1)");
        } else if constexpr (std::is_same_v<S, AartsInit>) {
          require(s.chi > 0.0 && s.chi < 1.0, "aarts: chi must be in (0, 1)");
        } else if constexpr (std::is_same_v<S, MaxDiffInit>) {
          require(s.p_r > 0.0 && s.p_r < 1.0, "maxdiff: p_r must be in (0, 1)");
        }
      },
      spec);
}

double johnson_temperature(double mean_uphill, double chi0) {
  return checked(mean_uphill / std::log(1.0 / chi0), "johnson");
}

double aarts_temperature(double mean_uphill, long long decreasing, long long increasing,
                         double chi) {
  const double m1 = static_cast<double>(decreasing);
  const double m2 = static_cast<double>(increasing);
  const double denom = m2 * chi - m1 * (1.0 - chi);
  if (!(denom > 0.0)) throw SearchError("aarts: m2 chi - m1 (1 - chi) must be positive");
  const double arg = m2 / denom;
  if (!(arg > 1.0)) throw SearchError("aarts: logarithm argument must exceed 1");
  return checked(mean_uphill / std::log(arg), "aarts");
}

double maxdiff_temperature(double max_difference, double p_r) {
  return checked(-std::abs(max_difference) / std::log(p_r), "maxdiff");
}

double init_temp(const InitTempSpec& spec, Evaluator& eval, Rng& rng, const MoveSpec& move) {
  validate(spec);
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, KirkpatrickInit>) {
          return kirkpatrick(s, eval, rng, move);
        } else if constexpr (std::is_same_v<S, JohnsonInit>) {
          const WalkStats w = random_walk(eval, rng, move, s.samples);
          if (w.uphill == 0) throw SearchError("johnson: no uphill moves sampled");
          return johnson_temperature(w.uphill_sum / static_cast<double>(w.uphill), s.chi0);
        } else if constexpr (std::is_same_v<S, AartsInit>) {
          const WalkStats w = random_walk(eval, rng, move, s.samples);
          if (w.uphill == 0) throw SearchError("aarts: no uphill moves sampled");
          return aarts_temperature(w.uphill_sum / static_cast<double>(w.uphill), w.downhill,
                                   w.uphill, s.chi);
        } else if constexpr (std::is_same_v<S, VarianceInit>) {
          return checked(sample_variance(sample_values(eval, rng, s.samples)), "variance");
        } else {
          const auto v = sample_values(eval, rng, s.samples);
          const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
          return maxdiff_temperature(*hi - *lo, s.p_r);
        }
      },
      spec);
}

double init_temp(const InitTempSpec& spec, const Problem& problem, Rng& rng) {
  Evaluator eval(problem);
  return init_temp(spec, eval, rng);
}

void validate(const ScheduleSpec& spec) {
  require(spec.t0 > 0.0 && std::isfinite(spec.t0), "cooling: T0 must be positive");
  if (spec.t_final) {
    require(*spec.t_final > 0.0 && *spec.t_final < spec.t0,
            "cooling: T_f must lie in (0, T0)");
  }
  std::visit(
      [](const auto& law) {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Geometric>) {
          require(law.alpha > 0.0 && law.alpha < 1.0, "geometric: alpha must be in (0, 1)");
        } else if constexpr (std::is_same_v<L, LundyMees>) {
          require(law.beta > 0.0, "lundy_mees: beta must be > 0");
        } else if constexpr (std::is_same_v<L, AartsLaarhoven>) {
          require(law.epsilon > 0.0, "aarts_laarhoven: epsilon must be > 0");
        } else if constexpr (std::is_same_v<L, Boltzmann>) {
          require(law.c >= 1.0, "boltzmann: c must be >= 1");
        } else if constexpr (std::is_same_v<L, Vfsr>) {
          require(law.c_scale > 0.0, "vfsr: c_scale must be > 0");
          require(law.n > 0.0, "vfsr: n must be > 0");
        } else if constexpr (std::is_same_v<L, PowerSchedule>) {
          require(law.n > 0.0, "power: n must be > 0");
        }
      },
      spec.law);
}

bool needs_stats(const CoolingLaw& law) {
  return std::holds_alternative<AartsLaarhoven>(law) || std::holds_alternative<Huang>(law);
}

double huang_uncapped(double t_k, const CoolingStats& stats) {
  if (!(stats.sigma > 0.0)) throw SearchError("huang: sigma_k must be positive");
  if (!stats.previous_mean) return t_k;
  const double change = stats.mean - *stats.previous_mean;
  return t_k * std::exp(-t_k * change / (stats.sigma * stats.sigma));
}

double cool(const ScheduleSpec& spec, double t_k, long long k,
            const std::optional<CoolingStats>& stats) {
  if (k < 0) throw ConfigError("cool: k must be >= 0");
  if (!(t_k > 0.0)) throw ConfigError("cool: T_k must be positive");
  const double t0 = spec.t0;
  const double kd = static_cast<double>(k);
  return std::visit(
      [&](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, Geometric>) {
          return law.alpha * t_k;
        } else if constexpr (std::is_same_v<L, LundyMees>) {
          return t_k / (1.0 + law.beta * t_k);
        } else if constexpr (std::is_same_v<L, AartsLaarhoven>) {
          if (!stats || !(stats->sigma > 0.0)) {
            throw SearchError("aarts_laarhoven: sigma_k must be positive");
          }
          return t_k / (1.0 + t_k * std::log1p(law.epsilon) / (3.0 * stats->sigma));
        } else if constexpr (std::is_same_v<L, Boltzmann>) {
          return t0 / std::log(kd + law.c);
        } else if constexpr (std::is_same_v<L, FastSchedule>) {
          return t0 / (kd + 1.0);
        } else if constexpr (std::is_same_v<L, Vfsr>) {
          return t0 * std::exp(-law.c_scale * std::pow(kd, 1.0 / law.n));
        } else if constexpr (std::is_same_v<L, PowerSchedule>) {
          return t0 / std::pow(kd + 1.0, 1.0 / law.n);
        } else {
          if (!stats) throw SearchError("huang: run statistics required");
          return std::min(t_k, huang_uncapped(t_k, *stats));
        }
      },
      spec.law);
}

double closed_form(const ScheduleSpec& spec, long long k) {
  if (k < 0) throw ConfigError("closed_form: k must be >= 0");
  if (const auto* g = std::get_if<Geometric>(&spec.law)) {
    return std::pow(g->alpha, static_cast<double>(k)) * spec.t0;
  }
  if (const auto* lm = std::get_if<LundyMees>(&spec.law)) {
    return spec.t0 / (1.0 + static_cast<double>(k) * lm->beta * spec.t0);
  }
  throw ConfigError("closed_form: only geometric and lundy_mees have closed forms");
}

}  // namespace anneal
