#include <gtest/gtest.h>

#include <cmath>

#include "anneal/acceptance.hpp"

using namespace anneal;

namespace {

constexpr double kInvE = 0.367879441171442322;        // exp(-1)
constexpr double kBarkerOne = 0.268941421369995121;   // 1 / (1 + e)
constexpr double kGenSquare = 0.778800783071404868;   // exp(-1/4)

const std::vector<AcceptanceSpec>& all_rules() {
  static const std::vector<AcceptanceSpec> rules = {
      {Metropolis{}, false}, {Generalized{2.0, 1.0}, false}, {Barker{}, false},
      {JohnsonLinear{}, false}, {Metropolis{}, true}};
  return rules;
}

}  // namespace

TEST(AcceptProbability, Examples) {
  const AcceptanceSpec m{Metropolis{}, false};
  EXPECT_EQ(accept_probability(m, -1.0, 1.0), 1.0);
  EXPECT_NEAR(accept_probability(m, 2.0, 2.0), kInvE, 1e-15);
  EXPECT_EQ(accept_probability({Barker{}, false}, 0.0, 3.0), 0.5);
  EXPECT_NEAR(accept_probability({Barker{}, false}, 1.0, 1.0), kBarkerOne, 1e-15);
  EXPECT_DOUBLE_EQ(accept_probability({JohnsonLinear{}, false}, 0.5, 1.0), 0.5);
  EXPECT_EQ(accept_probability({JohnsonLinear{}, false}, 2.0, 1.0), 0.0);
  EXPECT_NEAR(accept_probability({Generalized{2.0, 1.0}, false}, 1.0, 2.0), kGenSquare, 1e-15);
}

TEST(AcceptProbability, NonPositiveTemperatureThrows) {
  for (const auto& r : all_rules()) {
    EXPECT_THROW(accept_probability(r, 1.0, 0.0), ConfigError);
    EXPECT_THROW(accept_probability(r, 1.0, -1.0), ConfigError);
  }
}

TEST(AcceptProbability, MonotoneInDeltaAndTemperature) {
  for (const auto& r : all_rules()) {
    for (double t : {0.1, 1.0, 10.0}) {
      double prev = 2.0;
      for (double d = -5.0; d <= 50.0; d += 0.05) {
        const double p = accept_probability(r, d, t);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        EXPECT_LE(p, prev + 1e-15);
        prev = p;
      }
    }
    for (double d : {0.1, 1.0, 5.0}) {
      double prev = -1.0;
      for (double t = 0.01; t < 100.0; t *= 1.1) {
        const double p = accept_probability(r, d, t);
        EXPECT_GE(p, prev - 1e-15);
        prev = p;
      }
    }
  }
}

TEST(AcceptProbability, VanishesAtZeroTemperature) {
  for (const auto& r : all_rules()) {
    EXPECT_LT(accept_probability(r, 1.0, 1e-6), 1e-12);
  }
}

TEST(AcceptProbability, GeneralizedIdentityIsMetropolis) {
  const AcceptanceSpec m{Metropolis{}, false};
  const AcceptanceSpec g{Generalized{1.0, 1.0}, false};
  for (double d = -3.0; d <= 30.0; d += 0.37) {
    for (double t = 0.05; t < 50.0; t *= 1.7) {
      EXPECT_EQ(accept_probability(m, d, t), accept_probability(g, d, t));
    }
  }
}

TEST(AcceptanceSpec, Validation) {
  EXPECT_THROW(validate(AcceptanceSpec{Generalized{0.0, 1.0}, false}), ConfigError);
  EXPECT_THROW(validate(AcceptanceSpec{Generalized{1.0, -1.0}, false}), ConfigError);
  EXPECT_NO_THROW(validate(AcceptanceSpec{Generalized{0.5, 2.0}, true}));
}

TEST(Decide, DownhillAlwaysAccepted) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) EXPECT_TRUE(decide({Metropolis{}, false}, -5.0, 0.3, rng));
}

TEST(Decide, ClampedLinearNeverAccepts) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) EXPECT_FALSE(decide({JohnsonLinear{}, false}, 2.0, 1.0, rng));
}

TEST(Decide, ConsumesOneDraw) {
  Rng a(5);
  Rng b(5);
  decide({Metropolis{}, false}, -1.0, 1.0, a);
  b();
  EXPECT_EQ(a(), b());
  decide({Barker{}, false}, 1.0, 1.0, a);
  b();
  EXPECT_EQ(a(), b());
}

TEST(Decide, EmpiricalMetropolisRate) {
  Rng rng(2024);
  long long hits = 0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) hits += decide({Metropolis{}, false}, 1.5, 1.5, rng) ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(hits) / draws, kInvE, 0.005);
}

TEST(ExpTable, WithinTolerance) {
  const ExpTable& table = exp_table();
  double worst = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double z = 20.0 * i / 400000.0;
    worst = std::max(worst, std::abs(table(z) - std::exp(-z)));
  }
  EXPECT_LE(worst, 1e-4);
  EXPECT_EQ(table(25.0), 0.0);
  EXPECT_EQ(table(0.0), 1.0);
}
