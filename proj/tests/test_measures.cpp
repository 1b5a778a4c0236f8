#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "quenchxy/measures.hpp"
#include "support/reference.hpp"

using namespace quenchxy;

namespace {

Matrix2c random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix2c a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix2c rho = a * a.adjoint();
  return rho / rho.trace();
}

Matrix4c random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix4c a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix4c rho = a * a.adjoint();
  return rho / rho.trace();
}

Matrix2c random_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  const double a = u(rng), b = u(rng), c = u(rng), t = 0.5 * u(rng);
  Matrix2c m;
  m << std::polar(std::cos(t), a), std::polar(std::sin(t), b), -std::polar(std::sin(t), c - b + a),
      std::polar(std::cos(t), c);
  return m;
}

double werner_discord(double p) {
  // Werner state with singlet weight p.
  return (1 - p) / 4 * std::log2(1 - p) - (1 + p) / 2 * std::log2(1 + p) + (1 + 3 * p) / 4 * std::log2(1 + 3 * p);
}

}  // namespace

TEST(Entropy, Examples) {
  Eigen::Vector4cd v(1, 0, 0, 0);
  EXPECT_NEAR(von_neumann_entropy(Matrix4c(v * v.adjoint())), 0.0, 1e-14);
  EXPECT_NEAR(von_neumann_entropy(Matrix4c(Matrix4c::Identity() / 4.0)), 2.0, 1e-14);
  Matrix4c half = Matrix4c::Zero();
  half(0, 0) = half(1, 1) = 0.5;
  EXPECT_NEAR(von_neumann_entropy(half), 1.0, 1e-14);
}

TEST(Entropy, QubitFormulaMatchesEigenvalues) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Matrix2c rho = random_qubit(rng);
    EXPECT_NEAR(qubit_entropy(rho), von_neumann_entropy(rho), 1e-12);
    EXPECT_NEAR(qubit_entropy(Matrix2c(0.3 * rho)), von_neumann_entropy(rho), 1e-12);
  }
  EXPECT_EQ(qubit_entropy(Matrix2c::Zero()), 0.0);
}

TEST(Concurrence, BellProductWerner) {
  for (const auto& s : ref::bell_states()) EXPECT_NEAR(concurrence(s.rho), 1.0, 1e-12) << s.name;
  for (const auto& s : ref::product_states()) EXPECT_NEAR(concurrence(s.rho), 0.0, 1e-7) << s.name;
  EXPECT_NEAR(concurrence(ref::werner(1.0 / 3.0)), 0.0, 1e-7);
  for (double p : {0.2, 0.5, 0.8}) EXPECT_NEAR(concurrence(ref::werner(p)), std::max(0.0, (3 * p - 1) / 2), 1e-7);
}

TEST(Concurrence, MatchesWoottersFormulaOnRandomStates) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 100; ++k) {
    const Matrix4c rho = random_state(rng);
    EXPECT_NEAR(concurrence(rho), ref::concurrence(rho), 1e-7);
  }
}

TEST(LogNegativity, Examples) {
  for (const auto& s : ref::bell_states()) EXPECT_NEAR(log_negativity(s.rho), 1.0, 1e-12) << s.name;
  EXPECT_NEAR(log_negativity(Matrix4c(Matrix4c::Identity() / 4.0)), 0.0, 1e-14);
  for (double p : {0.5, 0.8}) EXPECT_NEAR(log_negativity(ref::werner(p)), std::log2((1 + 3 * p) / 2), 1e-12);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 50; ++k) {
    const Matrix4c rho = random_state(rng);
    EXPECT_NEAR(log_negativity(rho), std::max(0.0, ref::log_negativity(rho)), 1e-10);
  }
}

TEST(LogNegativity, VanishesExactlyWhenConcurrenceDoes) {
  for (const auto& s : ref::oracle_states()) {
    const double c = concurrence(s.rho);
    const double ln = log_negativity(s.rho);
    EXPECT_EQ(c > 1e-8, ln > 1e-8) << s.name << " C=" << c << " LN=" << ln;
  }
}

TEST(MutualInformation, Examples) {
  for (const auto& s : ref::product_states()) EXPECT_NEAR(mutual_information(s.rho), 0.0, 1e-12) << s.name;
  EXPECT_NEAR(mutual_information(ref::bell_states()[0].rho), 2.0, 1e-12);
  Matrix4c cc = Matrix4c::Zero();
  cc(0, 0) = cc(3, 3) = 0.5;
  EXPECT_NEAR(mutual_information(cc), 1.0, 1e-12);
}

TEST(InformationMeasures, BellStates) {
  for (const auto& s : ref::bell_states()) {
    EXPECT_NEAR(classical_correlation(s.rho).value, 1.0, 1e-9) << s.name;
    EXPECT_NEAR(quantum_discord(s.rho).value, 1.0, 1e-9) << s.name;
    EXPECT_NEAR(work_deficit(s.rho).value, 1.0, 1e-9) << s.name;
  }
}

TEST(InformationMeasures, ClassicallyCorrelatedState) {
  Matrix4c cc = Matrix4c::Zero();
  cc(0, 0) = cc(3, 3) = 0.5;
  EXPECT_NEAR(classical_correlation(cc).value, 1.0, 1e-9);
  EXPECT_NEAR(quantum_discord(cc).value, 0.0, 1e-9);
  EXPECT_NEAR(work_deficit(cc).value, 0.0, 1e-9);
}

TEST(InformationMeasures, WernerDiscordIsAnalytic) {
  for (double p : {0.1, 0.4, 0.7, 0.95}) EXPECT_NEAR(quantum_discord(ref::werner(p)).value, werner_discord(p), 1e-6);
}

TEST(AllMeasures, VanishOnRandomProductStates) {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 100; ++k) {
    const Matrix4c rho = pauli::kron(random_qubit(rng), random_qubit(rng));
    EXPECT_LE(concurrence(rho), 1e-6);
    EXPECT_LE(log_negativity(rho), 1e-6);
    EXPECT_LE(quantum_discord(rho).value, 1e-6);
    EXPECT_LE(work_deficit(rho).value, 1e-6);
  }
}

TEST(AllMeasures, LocalUnitaryInvariance) {
  std::mt19937_64 rng(55);
  const auto corpus = ref::oracle_states(8);
  for (const auto& s : corpus) {
    const Matrix4c u = pauli::kron(random_unitary(rng), random_unitary(rng));
    const Matrix4c r = u * s.rho * u.adjoint();
    EXPECT_NEAR(concurrence(r), concurrence(s.rho), 1e-7) << s.name;
    EXPECT_NEAR(log_negativity(r), log_negativity(s.rho), 1e-9) << s.name;
    EXPECT_NEAR(quantum_discord(r).value, quantum_discord(s.rho).value, 1e-6) << s.name;
    EXPECT_NEAR(work_deficit(r).value, work_deficit(s.rho).value, 1e-6) << s.name;
  }
}

TEST(AllMeasures, DiscordBoundedByMarginalEntropies) {
  std::mt19937_64 rng(77);
  std::vector<Matrix4c> states;
  for (const auto& s : ref::oracle_states(20)) states.push_back(s.rho);
  for (int k = 0; k < 20; ++k) states.push_back(random_state(rng));
  for (const auto& rho : states) {
    const double d = quantum_discord(rho).value;
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, std::min(von_neumann_entropy(trace_out_second(rho)), von_neumann_entropy(trace_out_first(rho))) + 1e-6);
    EXPECT_GE(work_deficit(rho).value, 0.0);
    // One-way work deficit dominates discord for projective measurements.
    EXPECT_GE(work_deficit(rho).value, d - 1e-6);
  }
}

TEST(AllMeasures, MatchBruteForceOnSample) {
  std::vector<ref::NamedState> sample{{"werner0.7", ref::werner(0.7)}};
  const auto corpus = ref::oracle_states();
  for (std::size_t k = 0; k < corpus.size(); k += 10) sample.push_back(corpus[k]);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 2; ++k) sample.push_back({"random" + std::to_string(k), random_state(rng)});
  for (const auto& s : sample) {
    const auto bf = ref::brute_force(s.rho);
    EXPECT_NEAR(classical_correlation(s.rho).value, bf.classical, 1e-4) << s.name;
    EXPECT_NEAR(quantum_discord(s.rho).value, bf.discord, 1e-4) << s.name;
    EXPECT_NEAR(work_deficit(s.rho).value, bf.work_deficit, 1e-4) << s.name;
  }
}

TEST(Optimizer, ReportsCanonicalBasis) {
  const auto r = quantum_discord(ref::werner(0.6));
  ASSERT_TRUE(r.optimizer.has_value());
  EXPECT_GE(r.optimizer->theta, 0.0);
  EXPECT_LE(r.optimizer->theta, std::numbers::pi);
  EXPECT_GE(r.optimizer->phi_angle, 0.0);
  EXPECT_LT(r.optimizer->phi_angle, 2.0 * std::numbers::pi);
}

TEST(Optimizer, CanonicalFormDescribesSameMeasurement) {
  const MeasurementBasis b{4.0, -1.0};
  const auto p = b.projectors();
  const auto q = b.canonical().projectors();
  // Same projector set, possibly with outcomes swapped.
  const bool same = p[0].isApprox(q[0], 1e-12) || p[0].isApprox(q[1], 1e-12);
  EXPECT_TRUE(same);
}

TEST(Optimizer, ThrowsWhenIterationBudgetIsExhausted) {
  OptimizerSettings tight;
  tight.max_iterations = 1;
  tight.value_tolerance = 0.0;
  tight.size_tolerance = 0.0;
  try {
    quantum_discord(ref::werner(0.6), tight);
    FAIL() << "expected OptimizerError";
  } catch (const OptimizerError& e) {
    EXPECT_TRUE(std::isfinite(e.best_value));
  }
}

TEST(Validation, RejectsInvalidMatrices) {
  Matrix4c bad = Matrix4c::Identity() / 4.0;
  bad(0, 1) = 0.1;
  EXPECT_THROW(concurrence(bad), MeasureError);
  EXPECT_THROW(quantum_discord(Matrix4c(Matrix4c::Identity() / 2.0)), MeasureError);
  Matrix4c neg = Matrix4c::Zero();
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(log_negativity(neg), MeasureError);
  Matrix4c nan = Matrix4c::Identity() / 4.0;
  nan(2, 2) = std::nan("");
  EXPECT_THROW(mutual_information(nan), MeasureError);
}
