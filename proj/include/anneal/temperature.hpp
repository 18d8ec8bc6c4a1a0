#pragma once

#include <optional>
#include <variant>

#include "anneal/core.hpp"
#include "anneal/moves.hpp"
#include "anneal/problem.hpp"

namespace anneal {

// ---- Initial temperature ------------------------------------------------

// Start from the variance estimate (1 for a flat sample) and multiply by
// `growth` until a trial of `samples` Metropolis proposals reaches
// acceptance chi0. Capped at 1e6 x the starting value.
struct KirkpatrickInit {
  double chi0 = 0.8;
  double growth = 1.5;
  int samples = 100;
};

// T0 = mean positive delta / ln(1/chi0).
struct JohnsonInit {
  double chi0 = 0.8;
  int samples = 100;
};

// T0 = mean positive delta / ln(m2 / (m2 chi - m1 (1 - chi))).
struct AartsInit {
  double chi = 0.8;
  int samples = 100;
};

// T0 = variance of f over uniform feasible samples.
struct VarianceInit {
  int samples = 100;
};

// T0 = -|max pairwise difference| / ln p_r.
struct MaxDiffInit {
  double p_r = 0.9;
  int samples = 100;
};

using InitTempSpec =
    std::variant<KirkpatrickInit, JohnsonInit, AartsInit, VarianceInit, MaxDiffInit>;

inline constexpr double kKirkpatrickCap = 1e6;

void validate(const InitTempSpec& spec);

// Samples use the given evaluator (so they are counted) and a random walk of
// `move` proposals for the delta-based procedures.
double init_temp(const InitTempSpec& spec, Evaluator& eval, Rng& rng,
                 const MoveSpec& move = SingleCoordinate{});
double init_temp(const InitTempSpec& spec, const Problem& problem, Rng& rng);

// Closed forms behind the sampling procedures.
double johnson_temperature(double mean_uphill, double chi0);
double aarts_temperature(double mean_uphill, long long decreasing, long long increasing,
                         double chi);
double maxdiff_temperature(double max_difference, double p_r);

// ---- Cooling schedules --------------------------------------------------

// T_{k+1} = alpha T_k
struct Geometric {
  double alpha = 0.9;
};
// T_{k+1} = T_k / (1 + beta T_k)
struct LundyMees {
  double beta = 1e-3;
};
// T_{k+1} = T_k / (1 + T_k ln(1 + eps) / (3 sigma_k))
struct AartsLaarhoven {
  double epsilon = 0.1;
};
// T_k = T0 / ln(k + c)
struct Boltzmann {
  double c = 2.718281828459045;
};
// T_k = T0 / (k + 1)
struct FastSchedule {};
// T_k = T0 exp(-c k^(1/n))
struct Vfsr {
  double c_scale = 1.0;
  double n = 1.0;
};
// T_k = T0 / (k + 1)^(1/n)
struct PowerSchedule {
  double n = 1.0;
};
// T_{k+1} = T_k exp(-T_k (fbar_k - fbar_{k-1}) / sigma_k^2), capped at T_k.
struct Huang {};

using CoolingLaw = std::variant<Geometric, LundyMees, AartsLaarhoven, Boltzmann, FastSchedule,
                                Vfsr, PowerSchedule, Huang>;

struct ScheduleSpec {
  CoolingLaw law = Geometric{};
  double t0 = 1.0;
  std::optional<double> t_final;
};

// Statistics of the objective values observed during the inner loop at the
// current temperature.
struct CoolingStats {
  double sigma = 0.0;
  double mean = 0.0;
  std::optional<double> previous_mean;
};

void validate(const ScheduleSpec& spec);

// Temperature at outer index k (index-based laws) or the successor of t_k
// (recursive laws). Huang's law is capped so it never heats.
double cool(const ScheduleSpec& spec, double t_k, long long k,
            const std::optional<CoolingStats>& stats = std::nullopt);

// Huang's update before the monotone cap.
double huang_uncapped(double t_k, const CoolingStats& stats);

// alpha^k T0 or T0 / (1 + k beta T0); other laws throw ConfigError.
double closed_form(const ScheduleSpec& spec, long long k);

// True for the laws that read sigma/means from CoolingStats.
bool needs_stats(const CoolingLaw& law);

}  // namespace anneal
