#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "quenchxy/model.hpp"

using namespace quenchxy;

TEST(QuadraticForm, DecoupledSpinsGiveMinusIdentity) {
  for (double gamma : {0.1, 0.5, 1.0}) {
    const auto qf = build_quadratic_form(ModelSpec::uniform(3, gamma, 0.0, 1.0));
    EXPECT_TRUE(qf.a_matrix.isApprox(-Matrix::Identity(3, 3)));
    EXPECT_TRUE(qf.b_matrix.isZero());
  }
}

TEST(QuadraticForm, SingleOpenBondEntries) {
  const auto qf = build_quadratic_form(ModelSpec::uniform(2, 1.0, 1.0, 0.0, Boundary::open));
  EXPECT_DOUBLE_EQ(qf.a_matrix(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(qf.a_matrix(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(qf.a_matrix(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(qf.a_matrix(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(qf.b_matrix(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(qf.b_matrix(1, 0), -0.5);
}

TEST(QuadraticForm, SymmetryHoldsForRandomSpecs) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.3, 1.0);
  for (Boundary b : {Boundary::periodic, Boundary::open}) {
    for (int trial = 0; trial < 20; ++trial) {
      ModelSpec spec{8, 0.37, {}, {}, b};
      for (int i = 0; i < 8; ++i) {
        spec.couplings.push_back(g(rng));
        spec.fields.push_back(g(rng));
      }
      const auto qf = build_quadratic_form(spec);
      EXPECT_EQ((qf.a_matrix - qf.a_matrix.transpose()).cwiseAbs().maxCoeff(), 0.0);
      EXPECT_EQ((qf.b_matrix + qf.b_matrix.transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(QuadraticForm, PeriodicWrapBondUsesBulkPrefactors) {
  ModelSpec spec = ModelSpec::uniform(5, 0.4, 1.0, 1.0);
  spec.couplings[4] = 2.0;
  const auto qf = build_quadratic_form(spec);
  EXPECT_DOUBLE_EQ(qf.a_matrix(4, 0), 1.0);
  EXPECT_DOUBLE_EQ(qf.b_matrix(4, 0), 0.4);
  EXPECT_DOUBLE_EQ(qf.b_matrix(0, 4), -0.4);

  spec.boundary = Boundary::open;
  const auto open = build_quadratic_form(spec);
  EXPECT_EQ(open.a_matrix(4, 0), 0.0);
  EXPECT_EQ(open.b_matrix(4, 0), 0.0);
}

TEST(ModelSpec, RejectsInvalidInput) {
  EXPECT_THROW(ModelSpec::uniform(1, 0.5, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ModelSpec::uniform(4, 0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ModelSpec::uniform(4, std::nan(""), 1.0, 1.0), std::invalid_argument);
  ModelSpec bad{4, 0.5, {1, 1, 1}, {1, 1, 1, 1}, Boundary::open};
  EXPECT_THROW(build_quadratic_form(bad), std::invalid_argument);
}

TEST(Boundary, StringRoundTrip) {
  for (Boundary b : {Boundary::periodic, Boundary::open}) EXPECT_EQ(boundary_from_string(to_string(b)), b);
  EXPECT_THROW(boundary_from_string("twisted"), std::invalid_argument);
}

TEST(SampleDisorder, ZeroWidthGivesMeanExactly) {
  auto rng = realization_stream(1, 0);
  const auto before = rng;
  const auto spec = sample_disorder({12, 0.4, Boundary::periodic}, {DisorderTarget::coupling, 0.73, 0.0, 1.0}, rng);
  for (double j : spec.couplings) EXPECT_EQ(j, 0.73);
  for (double h : spec.fields) EXPECT_EQ(h, 1.0);
  EXPECT_EQ(rng, before);
}

TEST(SampleDisorder, FieldTargetLeavesCouplingsFixed) {
  auto rng = realization_stream(3, 4);
  const auto spec = sample_disorder({6, 0.4, Boundary::open}, {DisorderTarget::field, 0.5, 0.3, 1.0}, rng);
  for (double j : spec.couplings) EXPECT_EQ(j, 1.0);
  EXPECT_NE(spec.fields[0], spec.fields[1]);
  EXPECT_EQ(spec.boundary, Boundary::open);
}

TEST(SampleDisorder, MomentsOfTenThousandDraws) {
  auto rng = realization_stream(2024, 0);
  const auto spec = sample_disorder({10000, 0.4, Boundary::periodic}, {DisorderTarget::coupling, 1.0, 0.3, 1.0}, rng);
  const double mean = std::accumulate(spec.couplings.begin(), spec.couplings.end(), 0.0) / 1e4;
  double var = 0.0;
  for (double j : spec.couplings) var += (j - mean) * (j - mean);
  const double sd = std::sqrt(var / (1e4 - 1));
  EXPECT_NEAR(mean, 1.0, 0.01);
  EXPECT_NEAR(sd, 0.3, 0.01);
}

TEST(SampleDisorder, SameStreamSameRealization) {
  const ChainTemplate chain{16, 0.4, Boundary::periodic};
  const DisorderSpec dis{DisorderTarget::coupling, 0.8, 0.3, 1.0};
  auto r1 = realization_stream(99, 17);
  auto r2 = realization_stream(99, 17);
  auto r3 = realization_stream(99, 18);
  const auto a = sample_disorder(chain, dis, r1);
  EXPECT_EQ(a.couplings, sample_disorder(chain, dis, r2).couplings);
  EXPECT_NE(a.couplings, sample_disorder(chain, dis, r3).couplings);
}

TEST(SampleDisorder, SaltSeparatesStreams) {
  auto a = realization_stream(5, 0, 0);
  auto b = realization_stream(5, 0, 1);
  EXPECT_NE(a(), b());
}

TEST(SampleDisorder, RejectsNegativeWidth) {
  auto rng = realization_stream(0, 0);
  EXPECT_THROW(sample_disorder({4, 0.4, Boundary::open}, {DisorderTarget::field, 0.0, -0.1, 1.0}, rng),
               std::invalid_argument);
}

TEST(OrderedCounterpart, UsesMeanParameters) {
  const auto sg = ordered_counterpart({8, 0.4, Boundary::periodic}, {DisorderTarget::coupling, 0.6, 0.3, 1.0});
  EXPECT_EQ(sg.couplings, std::vector<double>(8, 0.6));
  EXPECT_EQ(sg.fields, std::vector<double>(8, 1.0));
  const auto rf = ordered_counterpart({8, 0.4, Boundary::periodic}, {DisorderTarget::field, 0.6, 0.3, 1.0});
  EXPECT_EQ(rf.couplings, std::vector<double>(8, 1.0));
  EXPECT_EQ(rf.fields, std::vector<double>(8, 0.6));
}
