#pragma once

#include <array>
#include <variant>

#include "anneal/core.hpp"

namespace anneal {

// min{1, exp(-delta/T)}
struct Metropolis {};

// min{1, exp(-delta/gamma(T))} with gamma(T) = scale * T^power, which is
// positive and strictly increasing for scale > 0, power > 0.
struct Generalized {
  double power = 1.0;
  double scale = 1.0;
};

// 1 / (1 + exp(delta/T))
struct Barker {};

// max{0, min{1, 1 - delta/T}}
struct JohnsonLinear {};

using AcceptanceRule = std::variant<Metropolis, Generalized, Barker, JohnsonLinear>;

struct AcceptanceSpec {
  AcceptanceRule rule = Metropolis{};
  // Use the exp lookup table for the Metropolis and generalized rules.
  bool lookup_table = false;
};

void validate(const AcceptanceSpec& spec);

// Probability of accepting a move of size delta at temperature t > 0.
double accept_probability(const AcceptanceSpec& spec, double delta, double t);

// Draws one u on [0, 1) and returns u < accept_probability(). Always consumes
// exactly one draw.
bool decide(const AcceptanceSpec& spec, double delta, double t, Rng& rng);

// exp(-z) on z in [0, 20] by linear interpolation over 4096 nodes; 0 beyond.
class ExpTable {
 public:
  static constexpr int kSize = 4096;
  static constexpr double kRange = 20.0;

  ExpTable();
  double operator()(double z) const;

 private:
  std::array<double, kSize> values_{};
};

const ExpTable& exp_table();

}  // namespace anneal
