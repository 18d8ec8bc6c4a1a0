#include "anneal/moves.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace anneal {

namespace {

Vector resample_coordinates(const Vector& x, const Box& box, Index count, Rng& rng) {
  const Index n = x.size();
  Vector y = x;
  if (count >= n) {
    for (Index i = 0; i < n; ++i) y[i] = uniform(rng, box.lower[i], box.upper[i]);
    return y;
  }
  // Partial Fisher-Yates for `count` distinct axes.
  std::vector<Index> axes(static_cast<std::size_t>(n));
  std::iota(axes.begin(), axes.end(), Index{0});
  for (Index k = 0; k < count; ++k) {
    const Index j = k + uniform_index(rng, n - k);
    std::swap(axes[static_cast<std::size_t>(k)], axes[static_cast<std::size_t>(j)]);
    const Index i = axes[static_cast<std::size_t>(k)];
    y[i] = uniform(rng, box.lower[i], box.upper[i]);
  }
  return y;
}

double cauchy(Rng& rng) {
  double u = uniform01(rng);
  if (u == 0.0) u = 0x1.0p-53;
  return std::tan(3.141592653589793 * (u - 0.5));
}

}  // namespace

void validate(const MoveSpec& spec) {
  std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, StepDirection>) {
          require(m.q0 > 0.0, "step_direction: q0 must be > 0");
          require(m.target_acc > 0.0 && m.target_acc < 1.0,
                  "step_direction: target_acc must be in (0, 1)");
          require(m.window >= 1, "step_direction: window must be >= 1");
        } else if constexpr (std::is_same_v<M, Corana>) {
          require(m.v.size() >= 1 && (m.v.array() > 0.0).all(),
                  "corana: every step v_i must be > 0");
        } else if constexpr (std::is_same_v<M, Gaussian> || std::is_same_v<M, Cauchy>) {
          require(m.scale > 0.0, "gaussian/cauchy: scale must be > 0");
        }
      },
      spec);
}

MoveState initial_move_state(const MoveSpec& spec) {
  MoveState s;
  if (const auto* sd = std::get_if<StepDirection>(&spec)) s.q = sd->q0;
  return s;
}

Vector propose_simplex(const Vector& x, Rng& rng) {
  const Index n = x.size();
  if (n < 2) throw ConfigError("simplex move needs n >= 2");
  // Two distinct free coordinates; the other n-2 are kept.
  const Index a = uniform_index(rng, n);
  Index b = uniform_index(rng, n - 1);
  if (b >= a) ++b;
  const double kept = x.sum() - x[a] - x[b];
  const double room = std::max(0.0, 1.0 - kept);
  Vector y = x;
  y[a] = uniform(rng, 0.0, room);
  y[b] = std::max(0.0, 1.0 - (kept + y[a]));
  return y;
}

Vector propose(const MoveSpec& spec, MoveState& state, const Vector& x,
               const Problem& problem, Rng& rng) {
  const Index n = x.size();
  return std::visit(
      [&](const auto& m) -> Vector {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, SimplexMove>) {
          if (problem.is_box()) throw ConfigError("simplex move on a box region");
          return propose_simplex(x, rng);
        } else if constexpr (std::is_same_v<M, SingleCoordinate>) {
          if (!problem.is_box()) return propose_simplex(x, rng);
          return resample_coordinates(x, problem.box(), 1, rng);
        } else if constexpr (std::is_same_v<M, RandomSubset>) {
          if (!problem.is_box()) return propose_simplex(x, rng);
          const Index choice = uniform_index(rng, 3);
          Index count = 1;
          if (choice == 1) count = 1 + uniform_index(rng, n);
          if (choice == 2) count = n;
          return resample_coordinates(x, problem.box(), count, rng);
        } else if constexpr (std::is_same_v<M, StepDirection>) {
          const Index i = uniform_index(rng, n);
          // Steps wider than the region only produce retries.
          if (problem.is_box()) state.q = std::min(state.q, problem.scale().maxCoeff());
          Vector y = x;
          for (int attempt = 0; attempt < kStepRetryLimit; ++attempt) {
            const double d = uniform(rng, -1.0, 1.0);
            y[i] = x[i] + state.q * d;
            if (contains(problem, y, 0.0)) return y;
            if (!problem.is_box()) break;
          }
          Vector r = repair(problem, y);
          if (!contains(problem, r)) throw SearchError("step_direction: no feasible proposal");
          return r;
        } else if constexpr (std::is_same_v<M, Corana>) {
          const Index i = state.axis_cursor % n;
          const double v = m.v.size() == 1 ? m.v[0] : m.v[i];
          if (m.v.size() != 1 && m.v.size() != n) {
            throw ConfigError("corana: step vector has wrong dimension");
          }
          Vector y = x;
          y[i] += uniform(rng, -1.0, 1.0) * v;
          state.axis_cursor = (i + 1) % n;
          return repair(problem, y);
        } else if constexpr (std::is_same_v<M, Gaussian>) {
          Vector y = x;
          for (Index i = 0; i < n; ++i) y[i] += m.scale * standard_normal(rng);
          return repair(problem, y);
        } else {
          Vector y = x;
          for (Index i = 0; i < n; ++i) y[i] += m.scale * cauchy(rng);
          return repair(problem, y);
        }
      },
      spec);
}

double step_gain(double acceptance_rate) {
  const double d = acceptance_rate - 0.5;
  return d * d * d + 1.0;
}

MoveState adapt_step(MoveState state, double target_acc) {
  if (state.proposed > 0) {
    const double acc =
        static_cast<double>(state.accepted) / static_cast<double>(state.proposed);
    state.q *= step_gain(acc + 0.5 - target_acc);
  }
  state.accepted = 0;
  state.proposed = 0;
  return state;
}

void record_outcome(const MoveSpec& spec, MoveState& state, bool accepted) {
  const auto* sd = std::get_if<StepDirection>(&spec);
  if (sd == nullptr) return;
  ++state.proposed;
  if (accepted) ++state.accepted;
  if (state.proposed >= sd->window) state = adapt_step(state, sd->target_acc);
}

}  // namespace anneal
