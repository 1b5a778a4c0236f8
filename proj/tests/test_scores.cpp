#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "quenchxy/scores.hpp"

using namespace quenchxy;

namespace {

ScoreSetup small_setup(ModelKind kind = ModelKind::spin_glass, double sigma = 0.3) {
  ScoreSetup s;
  s.kind = kind;
  s.n_sites = 12;
  s.gamma = 0.4;
  s.sigma_d = sigma;
  s.plan = RealizationPlan::fixed(24);
  s.seed = 2016;
  return s;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST(ModelKind, NamesRoundTrip) {
  for (ModelKind k : {ModelKind::spin_glass, ModelKind::random_field}) EXPECT_EQ(model_kind_from_string(to_string(k)), k);
  EXPECT_THROW(model_kind_from_string("bose_glass"), std::invalid_argument);
}

TEST(EnhancementScore, ZeroDisorderGivesZeroDelta) {
  for (ModelKind kind : {ModelKind::spin_glass, ModelKind::random_field}) {
    for (double beta : {kInf, 2.0}) {
      const auto p = enhancement_score(small_setup(kind, 0.0), 0.8, beta, Observable::discord);
      EXPECT_EQ(p.delta, 0.0);
      EXPECT_EQ(p.quenched_std_error, 0.0);
    }
  }
}

TEST(EnhancementScore, DisorderCreatesCorrelationsAtZeroCoupling) {
  auto setup = small_setup();
  setup.n_sites = 20;
  for (Observable o : {Observable::concurrence, Observable::log_negativity, Observable::discord, Observable::work_deficit}) {
    const auto p = enhancement_score(setup, 0.0, kInf, o);
    EXPECT_NEAR(p.ordered_value, 0.0, 1e-12) << to_string(o);
    EXPECT_GT(p.delta, 2.0 * p.delta_std_error) << to_string(o);
  }
}

TEST(EnhancementScore, DeltaWithinMeasureRange) {
  const auto setup = small_setup();
  for (double control : {0.0, 0.5, 1.0, 1.5}) {
    EXPECT_LE(std::abs(enhancement_score(setup, control, kInf, Observable::concurrence).delta), 1.0);
    EXPECT_LE(std::abs(enhancement_score(setup, control, 1.0, Observable::mutual_information).delta), 2.0);
  }
}

TEST(TotalScore, NearGroundStateIsNeverPositive) {
  const auto t = total_enhancement_score(small_setup(), 0.3, 1e4, Observable::concurrence);
  EXPECT_LE(t.total, 1e-12);
  EXPECT_NEAR(t.thermal.delta, t.zero_t_delta, 1e-10);
}

TEST(TotalScore, UsesPositivePartOfGroundDelta) {
  const auto setup = small_setup();
  const auto t = total_enhancement_score(setup, 0.3, 2.0, Observable::concurrence);
  EXPECT_DOUBLE_EQ(t.total, t.thermal.delta - std::max(0.0, t.zero_t_delta));
  EXPECT_EQ(t.thermal.delta, enhancement_score(setup, 0.3, 2.0, Observable::concurrence).delta);
  EXPECT_GT(t.total_std_error, 0.0);
  EXPECT_THROW(total_enhancement_score(setup, 0.3, kInf, Observable::concurrence), std::invalid_argument);
}

TEST(Sweep, RecordCountAndOrder) {
  const std::array<double, 3> controls{0.2, 0.6, 1.0};
  const std::array<double, 2> betas{kInf, 1.5};
  const std::array<Observable, 2> obs{Observable::concurrence, Observable::magnetization};
  const auto rows = sweep(small_setup(), controls, betas, obs, true);
  ASSERT_EQ(rows.size(), 12u);
  std::size_t k = 0;
  for (double c : controls) {
    for (double b : betas) {
      for (Observable o : obs) {
        EXPECT_EQ(rows[k].point.control, c);
        EXPECT_EQ(rows[k].point.beta_scaled, b);
        EXPECT_EQ(rows[k].point.observable, o);
        EXPECT_EQ(rows[k].total.has_value(), !std::isinf(b));
        EXPECT_TRUE(rows[k].error.empty());
        ++k;
      }
    }
  }
}

TEST(Sweep, SinglePointMatchesEnhancementScore) {
  const auto setup = small_setup(ModelKind::random_field);
  const std::array<double, 1> c{0.7};
  const std::array<double, 1> b{kInf};
  const std::array<Observable, 1> o{Observable::concurrence};
  const auto rows = sweep(setup, c, b, o, false);
  ASSERT_EQ(rows.size(), 1u);
  const auto p = enhancement_score(setup, 0.7, kInf, Observable::concurrence);
  EXPECT_EQ(rows[0].point.delta, p.delta);
  EXPECT_EQ(rows[0].point.quenched_mean, p.quenched_mean);
}

TEST(Sweep, PointResultIndependentOfGrid) {
  const auto setup = small_setup();
  const std::array<double, 1> lone{0.65};
  const std::array<double, 3> grid{0.55, 0.6, 0.65};
  const std::array<double, 1> b{kInf};
  const std::array<Observable, 1> o{Observable::concurrence};
  EXPECT_EQ(sweep(setup, lone, b, o, false)[0].point.quenched_mean, sweep(setup, grid, b, o, false)[2].point.quenched_mean);
}

TEST(Sweep, FailingControlIsRecordedAndSweepContinues) {
  auto setup = small_setup();
  setup.gamma = 0.0;  // invalid chain: every control fails
  const std::array<double, 2> c{0.1, 0.2};
  const std::array<double, 1> b{kInf};
  const std::array<Observable, 1> o{Observable::concurrence};
  const auto rows = sweep(setup, c, b, o, false);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_FALSE(r.error.empty());
  EXPECT_THROW(sweep(setup, std::span<const double>{}, b, o, false), std::invalid_argument);
}

TEST(Sweep, SharedRealizationsAcrossTemperatures) {
  const auto setup = small_setup();
  EXPECT_EQ(point_seed(setup.seed, 0.5), point_seed(setup.seed, 0.5));
  EXPECT_NE(point_seed(setup.seed, 0.5), point_seed(setup.seed, 0.55));
  EXPECT_NE(point_seed(1, 0.5), point_seed(2, 0.5));
}

TEST(Significance, TwoStandardErrors) {
  EXPECT_TRUE(significantly_positive(0.011, 0.005));
  EXPECT_FALSE(significantly_positive(0.01, 0.005));
  EXPECT_FALSE(significantly_positive(-0.1, 0.0));
  EXPECT_TRUE(significantly_positive(1e-12, 0.0));
}
