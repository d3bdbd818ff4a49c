#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace amalgam;

TEST(Regime, CaseAExponents) {
  const RegimeParams p = regime_params(-0.4, 3, 0.1);
  EXPECT_EQ(p.regime, RegimeCase::A);
  EXPECT_NEAR(p.r_exp, 0.3, 1e-15);
  EXPECT_NEAR(p.t_exp, -0.35, 1e-15);
  EXPECT_NEAR(select_parameters(-0.4, 3, 0.1, 64).R, std::pow(64.0, 0.3), 1e-12);
}

TEST(Regime, CaseBExponents) {
  const RegimeParams p = regime_params(-1.0, 3, 0.1);
  EXPECT_EQ(p.regime, RegimeCase::B);
  EXPECT_NEAR(p.r_exp, 0.4, 1e-15);
  EXPECT_NEAR(p.t_exp, -0.45, 1e-15);
}

TEST(Regime, InvalidDelta) {
  EXPECT_THROW(regime_params(-0.4, 3, 0.25), ValidationError);
  EXPECT_THROW(regime_params(-1.0, 3, 0.3), ValidationError);
  EXPECT_NO_THROW(regime_params(-1.0, 3, 0.2));
  EXPECT_THROW(regime_params(0.1, 3, 0.1), ValidationError);
}

TEST(Regime, DominantTermGrowsAndConditionsEventuallyHold) {
  for (double s : {-0.4, -1.0}) {
    const RegimeParams p = regime_params(s, 3, 0.1);
    // R^sigma T^2 = N^{delta/2} in case A and N^{1/2 - delta} in case B.
    const double growth = 3 * p.r_exp + 2 * p.t_exp;
    EXPECT_GT(growth, 0.0);
    const int j = smallest_admissible_power(p, 10.0);
    ASSERT_GT(j, 0);
    EXPECT_TRUE(check_regime(p, j, 10.0).all());
    EXPECT_FALSE(check_regime(p, j - 1, 10.0).all());
  }
}

TEST(Regime, LogSpaceHandlesHugeN) {
  const RegimeCheck c = check_regime(regime_params(-0.4, 3, 0.1), 5000.0, 10.0);
  EXPECT_TRUE(std::isfinite(c.m_over_dominant));
  EXPECT_TRUE(c.all());
}

TEST(Perturbation, NormScalesLikeRNs) {
  const double s = -0.4;
  for (int N : {16, 64, 256}) {
    const GridSpec g = make_grid(1, 2 * N + 1, Domain::Torus, 1);
    const DataPair phi = build_perturbation(PerturbationSpec::make(N, 2.0, 1), g);
    const double v = pair_norm(phi, SpaceSpec::make(Family::FourierAmalgam, 2, 2, s)) / (2.0 * std::pow(N, s));
    EXPECT_GT(v, 1.0);
    EXPECT_LT(v, 4.0);
  }
}

TEST(Perturbation, RequiresRoom) {
  EXPECT_THROW(build_perturbation(PerturbationSpec::make(8, 1.0, 1), make_grid(1, 16, Domain::Torus, 1)),
               ValidationError);
  EXPECT_THROW(PerturbationSpec::make(2, 1.0, 1), ValidationError);
}

TEST(Perturbation, TwoDimensionalCubes) {
  const GridSpec g = make_grid(2, 9, Domain::Torus, 1);
  const DataPair phi = build_perturbation(PerturbationSpec::make(4, 1.0, 2), g);
  EXPECT_DOUBLE_EQ(fl_norm(phi.u0, 1.0, 0.0), 36.0);
  EXPECT_TRUE(phi.u0.is_real_even());
}

TEST(SmoothData, HitsTargetNorm) {
  const GridSpec g = make_grid(1, 6, Domain::Torus, 1);
  const SpaceSpec sp = SpaceSpec::make(Family::FourierAmalgam, 2, 2, -0.4);
  EXPECT_NEAR(pair_norm(smooth_data(g, 4, 1.0, sp), sp), 1.0, 1e-14);
}

TEST(LowerBound, ScalesWithAmplitudeCubed) {
  const GridSpec g = make_grid(1, 3 * 17 + 1, Domain::Torus, 1);
  const NlwProblem pr = NlwProblem::make(3, 3, 1, g);
  const SpaceSpec sp = SpaceSpec::make(Family::FourierAmalgam, 2, 2, -0.4);
  const double T = 0.3;
  const auto ps1 = PerturbationSpec::make(8, 1.0, 1), ps2 = PerturbationSpec::make(8, 2.0, 1);
  const LowerBound a = lower_bound_check(build_perturbation(ps1, g), ps1, pr, T, sp, auto_mesh(g, T));
  const LowerBound b = lower_bound_check(build_perturbation(ps2, g), ps2, pr, T, sp, auto_mesh(g, T));
  EXPECT_NEAR(b.L / a.L, 8.0, 1e-10);
  EXPECT_NEAR(a.ratio, b.ratio, 1e-10);
  EXPECT_TRUE(a.time_below_threshold == (T <= 1.0 / std::sqrt(8.0)));
}

TEST(Lab, SmallSweepIsDeterministic) {
  InflationConfig cfg;
  cfg.N = {8, 16};
  cfg.theta = {-0.4, 1.0};
  cfg.threads = 2;
  const DataPair zero = DataPair::position_only(SpectralField(make_grid(1, 1, Domain::Torus, 1)));
  const ExperimentReport a = run_inflation(zero, cfg);
  cfg.threads = 1;
  const ExperimentReport b = run_inflation(zero, cfg);
  ASSERT_EQ(a.records.size(), 4u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_TRUE(a.records[i].error.empty()) << a.records[i].error;
    EXPECT_EQ(a.records[i].N, b.records[i].N);
    EXPECT_EQ(a.records[i].sol_norm, b.records[i].sol_norm);
    EXPECT_EQ(a.records[i].restricted_L, b.records[i].restricted_L);
  }
  const auto th = a.at_theta(1.0);
  ASSERT_EQ(th.size(), 2u);
  const auto base = a.at_theta(-0.4);
  for (std::size_t i = 0; i < th.size(); ++i)
    EXPECT_NEAR(th[i].sol_restricted / base[i].sol_restricted, std::pow(2.0, 0.7), 1e-12);
}

TEST(Lab, RejectsInvalidConfig) {
  InflationConfig cfg;
  cfg.s = 0.5;
  const DataPair zero = DataPair::position_only(SpectralField(make_grid(1, 1, Domain::Torus, 1)));
  EXPECT_THROW(run_inflation(zero, cfg), ValidationError);
  cfg.s = -0.4;
  cfg.rho = 4;
  EXPECT_THROW(run_inflation(zero, cfg), ValidationError);
}

TEST(Lab, ThreadBudgetHonoursRequest) { EXPECT_EQ(thread_budget(3), 3); }
