#include <gtest/gtest.h>

#include <cmath>

#include "fourvertex/estimator.hpp"
#include "test_support.hpp"

using namespace fvtest;

namespace {

FerroIsingInstance triangle_half() {
  FerroIsingInstance f;
  f.m = 3;
  for (auto [u, v] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
    FerroEdge e;
    e.u = u;
    e.v = v;
    e.beta_e = 3;
    e.x_exact = Rational(1, 2);
    e.x = 0.5;
    e.log_beta_e = std::log(3.0);
    f.edges.push_back(e);
  }
  return f;
}

}  // namespace

TEST(Estimator, Schedule) {
  for (int e : {1, 3, 6, 12}) {
    const auto s = make_schedule(e);
    ASSERT_GE(s.levels.size(), 2u);
    EXPECT_EQ(s.levels.front(), 0);
    EXPECT_EQ(s.levels[1], Rational(1, Integer(1) << e));
    EXPECT_EQ(s.levels.back(), 1);
    for (std::size_t i = 1; i + 1 < s.levels.size(); ++i) {
      EXPECT_LT(s.levels[i], s.levels[i + 1]);
      EXPECT_LE(s.levels[i + 1], s.levels[i] * (1 + Rational(1, e)));
    }
  }
}

TEST(Estimator, SingleEdgeAndEdgeless) {
  FerroIsingInstance one;
  one.m = 2;
  FerroEdge e;
  e.u = 0;
  e.v = 1;
  e.beta_e = 4;
  e.x_exact = Rational(3, 5);
  e.x = 0.6;
  one.edges.push_back(e);
  EstimatorOptions o;
  o.steps_per_sample = 20;
  const auto est = estimate_Z0(one, o);
  EXPECT_DOUBLE_EQ(est.log_value, 0.0);

  FerroIsingInstance none;
  none.m = 3;
  const auto zero = estimate_Z0(none, o);
  EXPECT_TRUE(zero.exact);
  EXPECT_EQ(zero.samples_used, 0u);
  EXPECT_DOUBLE_EQ(zero.log_value, 0.0);
}

TEST(Estimator, TriangleContract) {
  const auto f = triangle_half();
  const double truth = std::log(9.0 / 8);
  int hits = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    EstimatorOptions o;
    o.seed = 1000 + t;
    o.steps_per_sample = 60;
    const auto est = estimate_Z0(f, o);
    if (std::abs(std::exp(est.log_value - truth) - 1) <= 0.1) ++hits;
  }
  EXPECT_GE(hits, 70);
}

TEST(Estimator, Theta) {
  EstimatorOptions o;
  o.steps_per_sample = 50;
  int hits = 0;
  for (int t = 0; t < 100; ++t) {
    o.seed = t;
    const double z = std::exp(estimate_partition(theta4(Rational(2)), o).log_value);
    hits += z >= 9 && z <= 11;
  }
  EXPECT_GE(hits, 75);

  const auto one = estimate_partition(theta4(Rational(1)), o);
  EXPECT_TRUE(one.exact);
  EXPECT_EQ(one.samples_used, 0u);
  EXPECT_DOUBLE_EQ(one.log_value, std::log(4.0));
}

TEST(Estimator, OddCycleRefused) {
  try {
    estimate_partition(odd_cycle_fixture(), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoFerroReduction);
  }
  try {
    sample_configuration(odd_cycle_fixture(), 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoFerroReduction);
  }
}

TEST(Estimator, BadParams) {
  EstimatorOptions o;
  o.epsilon = 0;
  EXPECT_THROW(estimate_partition(theta4(Rational(2)), o), Error);
  o.epsilon = 0.1;
  o.delta = 1;
  EXPECT_THROW(estimate_partition(theta4(Rational(2)), o), Error);
}

TEST(Estimator, Deterministic) {
  EstimatorOptions o;
  o.steps_per_sample = 30;
  o.seed = 7;
  o.threads = 1;
  const auto a = estimate_Z0(triangle_half(), o);
  o.threads = 3;
  const auto b = estimate_Z0(triangle_half(), o);
  EXPECT_EQ(a.log_value, b.log_value);
  EXPECT_EQ(a.samples_used, b.samples_used);
}

TEST(Sampler, ThetaFrequencies) {
  const auto inst = theta4(Rational(2));
  const ConfigurationSampler s(inst);
  const std::size_t n = 20000;
  const auto draws = s.draw_many(50, n, 3);
  std::size_t heavy = 0;
  for (const auto& c : draws) {
    const Rational w = config_weight(inst, c);
    ASSERT_GT(w, 0);
    heavy += w == 4;
  }
  const double p = 0.8, se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(heavy) / n, p, 3 * se);
}

TEST(Sampler, ThetaUniformAtBetaOne) {
  const auto inst = theta4(Rational(1));
  const ConfigurationSampler s(inst);
  const std::size_t n = 20000;
  std::map<DartConfig, int> count;
  for (const auto& c : s.draw_many(10, n, 4)) ++count[c];
  EXPECT_EQ(count.size(), 4u);
  const double se = std::sqrt(0.25 * 0.75 / n);
  for (const auto& [c, k] : count) EXPECT_NEAR(static_cast<double>(k) / n, 0.25, 3 * se);
}

TEST(Sampler, ValidOnRandomInstances) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_four_regular(1 + static_cast<int>(gen() % 7), Rational(trial % 2 ? 2 : 1, 3), gen);
    if (!reduce_pipeline(inst).ferro) continue;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EXPECT_GT(config_weight(inst, sample_configuration(inst, 40, seed)), 0);
    }
  }
}

TEST(Sampler, Reproducible) {
  const auto inst = octahedron(Rational(2));
  const ConfigurationSampler s(inst);
  EXPECT_EQ(s.draw_many(100, 50, 9, 1), s.draw_many(100, 50, 9, 4));
}
