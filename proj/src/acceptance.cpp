#include "anneal/acceptance.hpp"

#include <algorithm>
#include <cmath>

namespace anneal {

namespace {

constexpr double kStep = ExpTable::kRange / (ExpTable::kSize - 1);

double metropolis_like(double z, bool table) {
  // z = delta / temperature-like quantity
  if (z <= 0.0) return 1.0;
  return table ? exp_table()(z) : std::exp(-z);
}

}  // namespace

ExpTable::ExpTable() {
  for (int i = 0; i < kSize; ++i) values_[static_cast<std::size_t>(i)] = std::exp(-i * kStep);
}

double ExpTable::operator()(double z) const {
  if (z <= 0.0) return 1.0;
  if (z >= kRange) return 0.0;
  const double pos = z / kStep;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values_.size()) return values_.back();
  const double frac = pos - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

const ExpTable& exp_table() {
  static const ExpTable table;
  return table;
}

void validate(const AcceptanceSpec& spec) {
  if (const auto* g = std::get_if<Generalized>(&spec.rule)) {
    require(g->power > 0.0 && std::isfinite(g->power), "generalized acceptance: power must be > 0");
    require(g->scale > 0.0 && std::isfinite(g->scale), "generalized acceptance: scale must be > 0");
  }
}

double accept_probability(const AcceptanceSpec& spec, double delta, double t) {
  if (!(t > 0.0)) throw ConfigError("acceptance: temperature must be positive");
  if (!std::isfinite(delta)) throw ConfigError("acceptance: delta must be finite");
  return std::visit(
      [&](const auto& rule) -> double {
        using R = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<R, Metropolis>) {
          return metropolis_like(delta / t, spec.lookup_table);
        } else if constexpr (std::is_same_v<R, Generalized>) {
          const double gamma = rule.scale * std::pow(t, rule.power);
          return metropolis_like(delta / gamma, spec.lookup_table);
        } else if constexpr (std::is_same_v<R, Barker>) {
          const double z = delta / t;
          if (z > 700.0) return 0.0;
          return 1.0 / (1.0 + std::exp(z));
        } else {
          return std::clamp(1.0 - delta / t, 0.0, 1.0);
        }
      },
      spec.rule);
}

bool decide(const AcceptanceSpec& spec, double delta, double t, Rng& rng) {
  const double u = uniform01(rng);
  return u < accept_probability(spec, delta, t);
}

}  // namespace anneal
