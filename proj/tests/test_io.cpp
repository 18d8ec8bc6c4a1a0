#include <gtest/gtest.h>

#include "anneal/io.hpp"
#include "anneal/methods.hpp"

using namespace anneal;

TEST(ConfigJson, AnnealConfigRoundTrip) {
  AnnealConfig c;
  c.init_temp = AartsInit{0.7, 50};
  c.cooling = Vfsr{2.0, 3.0};
  StepDirection sd;
  sd.q0 = 0.25;
  sd.target_acc = kOneFifthTargetAcceptance;
  sd.window = 7;
  c.move = sd;
  c.acceptance = {Generalized{1.5, 2.0}, true};
  c.t0 = 3.5;
  c.n_size = 12;
  c.t_final = 1e-4;
  c.objective_tolerance = 1e-6;
  c.stable_window = 8;
  c.chi_final = 0.01;
  c.p_floor = 0.001;
  c.max_outer = 40;
  c.max_seconds = 9.0;
  c.chain_cap = 100;
  c.seed = 123456789012345ULL;
  c.x0 = Vector::Constant(2, 0.5);
  const Json j = to_json(c);
  EXPECT_EQ(to_json(anneal_config_from_json(j)).dump(), j.dump());
}

TEST(ConfigJson, EveryKindRoundTrips) {
  for (const InitTempSpec& s : {InitTempSpec{KirkpatrickInit{}}, InitTempSpec{JohnsonInit{}},
                                InitTempSpec{AartsInit{}}, InitTempSpec{VarianceInit{}},
                                InitTempSpec{MaxDiffInit{}}}) {
    EXPECT_EQ(to_json(init_temp_from_json(to_json(s))), to_json(s));
  }
  for (const CoolingLaw& l : {CoolingLaw{Geometric{}}, CoolingLaw{LundyMees{}},
                              CoolingLaw{AartsLaarhoven{}}, CoolingLaw{Boltzmann{}},
                              CoolingLaw{FastSchedule{}}, CoolingLaw{Vfsr{}},
                              CoolingLaw{PowerSchedule{}}, CoolingLaw{Huang{}}}) {
    EXPECT_EQ(to_json(cooling_from_json(to_json(l))), to_json(l));
  }
  for (const MoveSpec& m :
       {MoveSpec{SingleCoordinate{}}, MoveSpec{RandomSubset{}}, MoveSpec{SimplexMove{}},
        MoveSpec{StepDirection{}}, MoveSpec{Corana{}}, MoveSpec{Gaussian{}}, MoveSpec{Cauchy{}}}) {
    EXPECT_EQ(to_json(move_from_json(to_json(m))), to_json(m));
  }
  for (const AcceptanceRule& a : {AcceptanceRule{Metropolis{}}, AcceptanceRule{Generalized{}},
                                  AcceptanceRule{Barker{}}, AcceptanceRule{JohnsonLinear{}}}) {
    const AcceptanceSpec s{a, false};
    EXPECT_EQ(to_json(acceptance_from_json(to_json(s))), to_json(s));
  }
  for (const LocalKind& k : {LocalKind{NelderMead{}}, LocalKind{Sds{3}},
                             LocalKind{SdsThermal{1, 0.5, 2.0}}}) {
    LocalSearchSpec s;
    s.kind = k;
    EXPECT_EQ(to_json(local_search_from_json(to_json(s))), to_json(s));
  }
}

TEST(ConfigJson, KindTags) {
  EXPECT_EQ(to_json(CoolingLaw{LundyMees{}})["kind"], "lundy_mees");
  EXPECT_EQ(to_json(CoolingLaw{AartsLaarhoven{}})["kind"], "aarts_laarhoven");
  EXPECT_EQ(to_json(MoveSpec{StepDirection{}})["kind"], "step_direction");
  EXPECT_EQ(to_json(AcceptanceSpec{JohnsonLinear{}, false})["kind"], "johnson_linear");
  EXPECT_EQ(to_json(InitTempSpec{MaxDiffInit{}})["kind"], "maxdiff");
}

TEST(ConfigJson, UnknownKeysRejected) {
  EXPECT_THROW(anneal_config_from_json(Json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW(cooling_from_json(Json{{"kind", "geometric"}, {"beta", 0.1}}), ConfigError);
  EXPECT_THROW(cooling_from_json(Json{{"kind", "arctic"}}), ConfigError);
  EXPECT_THROW(move_from_json(Json{{"scale", 1.0}}), ConfigError);
  EXPECT_THROW(local_search_from_json(Json{{"tolerance", 1.0}}), ConfigError);
  EXPECT_THROW(method_settings_from_json(Json{{"sa", {{"alpha", 0.5}}}}), ConfigError);
}

TEST(ConfigJson, MalformedValuesRejected) {
  EXPECT_THROW(anneal_config_from_json(Json{{"n_factor", "ten"}}), ConfigError);
  EXPECT_THROW(anneal_config_from_json(Json{{"n_factor", 2.5}}), ConfigError);
  EXPECT_THROW(anneal_config_from_json(Json{{"cut", -1.0}}), ConfigError);
  EXPECT_THROW(cooling_from_json(Json{{"kind", "geometric"}, {"alpha", 1.5}}), ConfigError);
  EXPECT_THROW(method_settings_from_json(Json{{"snun", 0}}), ConfigError);
  EXPECT_THROW(method_settings_from_json(Json::array()), ConfigError);
}

TEST(ConfigJson, ErrorNamesPath) {
  try {
    method_settings_from_json(Json{{"sa", {{"cooling", {{"kind", "geometric"}, {"x", 1}}}}}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sa.cooling"), std::string::npos) << e.what();
  }
}

TEST(ConfigJson, MethodSettingsRoundTrip) {
  MethodSettings m;
  m.heat_factor = 2.5;
  m.snun = 4;
  m.evo.sa_budget.reset();
  const Json j = to_json(m);
  const MethodSettings back = method_settings_from_json(j);
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_FALSE(back.evo.sa_budget.has_value());
  EXPECT_EQ(to_json(method_settings_from_json(to_json(MethodSettings{}))).dump(),
            to_json(MethodSettings{}).dump());
}

TEST(RecordJson, RunRecordRoundTrip) {
  RunRecord r;
  r.problem = "Branin";
  r.method = "sa";
  r.seed = 42;
  r.f_best = 0.397887;
  r.x_best = Vector::Constant(2, 3.14);
  r.f_final = 0.5;
  r.x_final = Vector::Constant(2, 3.0);
  r.evaluations = 1234;
  r.outer_iterations = 17;
  r.t0 = 2.5;
  r.stop_reason = StopReason::frozen;
  r.counters["heat_count"] = 3;
  r.phases.push_back({0, "local", 1.0, 10});
  const Json j = to_json(r);
  EXPECT_EQ(to_json(run_record_from_json(j)).dump(), j.dump());
  EXPECT_EQ(j["stop_reason"], "frozen");
}

TEST(RecordJson, TrialRoundTrip) {
  Trial t;
  t.problem = "Sphere";
  t.dim = 3;
  t.solver = "hybrid";
  t.rep = 2;
  t.seed = 7;
  t.failed = true;
  t.error = "boom";
  const Json j = to_json(t);
  EXPECT_EQ(to_json(trial_from_json(j)).dump(), j.dump());
  EXPECT_TRUE(j["record"].is_null());

  t.failed = false;
  t.error.clear();
  t.record.problem = "Sphere";
  t.record.method = "hybrid";
  t.record.x_best = Vector::Zero(3);
  t.record.x_final = Vector::Zero(3);
  const Json ok = to_json(t);
  EXPECT_EQ(to_json(trial_from_json(ok)).dump(), ok.dump());
  EXPECT_THROW(trial_from_json(Json{{"problem", "p"}}), ConfigError);
}
