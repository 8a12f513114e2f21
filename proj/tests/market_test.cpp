#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace sorte;
using sorte::testing::make_model;

TEST(MarketTest, CreateValidatesShape) {
  const MarketModel m = make_model({0.5, 0.5}, {{1.0, -1.0}, {0.0, 0.0}});
  EXPECT_EQ(m.num_agents(), 2);
  EXPECT_EQ(m.num_scenarios(), 2);
  EXPECT_DOUBLE_EQ(m.endowment(0, 1), -1.0);
}

TEST(MarketTest, ProbsMustSumToOne) {
  EXPECT_THROW(make_model({0.6, 0.5}, {{0.0, 0.0}}), ValidationError);
}

TEST(MarketTest, ZeroProbabilityRejected) {
  EXPECT_THROW(make_model({1.0, 0.0}, {{0.0, 0.0}}), ValidationError);
  EXPECT_THROW(make_model({1.2, -0.2}, {{0.0, 0.0}}), ValidationError);
}

TEST(MarketTest, RaggedEndowmentsRejected) {
  Matrix X(2, 1, 0.0);
  EXPECT_THROW(
      MarketModel::create({"a", "b"}, {"s0", "s1"}, {0.5, 0.5}, X), ValidationError);
}

TEST(MarketTest, ExpectationUnderReference) {
  const MarketModel m = make_model({0.3, 0.7}, {{2.0, -1.0}});
  const ProbMeasure p = ProbMeasure::reference(m);
  EXPECT_NEAR(expectation(m, p, m.endowments().row(0)), 0.3 * 2.0 - 0.7, 1e-15);
}

TEST(MarketTest, ExpectationOfConstantIsConstant) {
  const MarketModel m = make_model({0.5, 0.5}, {{0.0, 0.0}});
  const ProbMeasure q = ProbMeasure::create(m, {0.4, 1.6});
  EXPECT_NEAR(expectation(m, q, {3.25, 3.25}), 3.25, 1e-14);
}

TEST(MarketTest, ExpectationHandValue) {
  const MarketModel m = make_model({0.5, 0.5}, {{0.0, 0.0}});
  const ProbMeasure q = ProbMeasure::create(m, {0.5379, 1.4621});
  const std::vector<double> rv{-0.5, 0.5};
  // Independent oracle: plain accumulation loop.
  double brute = 0.0;
  for (int w = 0; w < 2; ++w) brute += m.prob(w) * q.density[w] * rv[w];
  const double e = expectation(m, q, rv);
  EXPECT_DOUBLE_EQ(e, brute);
  EXPECT_NEAR(e, 0.23105, 1e-9);
}

TEST(MarketTest, ExpectationDimensionError) {
  const MarketModel m = make_model({0.5, 0.5}, {{0.0, 0.0}});
  EXPECT_THROW(expectation(m, ProbMeasure::reference(m), {1.0}), DimensionError);
}

TEST(MarketTest, EntropyOfReferenceIsZero) {
  const MarketModel m = make_model({0.25, 0.75}, {{0.0, 0.0}});
  EXPECT_DOUBLE_EQ(relative_entropy(m, ProbMeasure::reference(m)), 0.0);
}

TEST(MarketTest, EntropyTwoPointValue) {
  const MarketModel m = make_model({0.5, 0.5}, {{0.0, 0.0}});
  const ProbMeasure q{std::vector<double>{2.0, 0.0}};
  EXPECT_DOUBLE_EQ(relative_entropy(m, q), std::log(2.0));
}

TEST(MarketPropertyTest, EntropyNonnegativeAndStrict) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int s = 2 + static_cast<int>(rng() % 5);
    std::vector<double> probs(s), dens(s);
    double pt = 0.0, qt = 0.0;
    for (int w = 0; w < s; ++w) {
      probs[w] = u(rng);
      pt += probs[w];
    }
    for (double& p : probs) p /= pt;
    const MarketModel m = make_model(probs, {std::vector<double>(s, 0.0)});
    for (int w = 0; w < s; ++w) {
      dens[w] = u(rng);
      qt += probs[w] * dens[w];
    }
    for (double& d : dens) d /= qt;
    const ProbMeasure q = ProbMeasure::create(m, dens, 1e-9);
    const double h = relative_entropy(m, q);
    EXPECT_GE(h, -1e-14);
    double dev = 0.0;
    for (double d : dens) dev = std::max(dev, std::fabs(d - 1.0));
    if (dev > 1e-3) EXPECT_GT(h, 0.0);
  }
}

TEST(MarketTest, GroupAggregate) {
  const MarketModel m = make_model({0.5, 0.5}, {{1.0, -1.0}, {0.0, 0.0}});
  EXPECT_EQ(group_aggregate(m, {1}), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(group_aggregate(m, {0, 1}), (std::vector<double>{1.0, -1.0}));
  EXPECT_THROW(group_aggregate(m, {}), IndexError);
  EXPECT_THROW(group_aggregate(m, {2}), IndexError);
}

TEST(MarketPropertyTest, GroupAggregatePartitionSumsToTotal) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<std::vector<double>> rows(4, std::vector<double>(3));
  for (auto& r : rows)
    for (double& x : r) x = u(rng);
  const MarketModel m = make_model({0.2, 0.5, 0.3}, rows);
  const auto total = aggregate_endowment(m);
  const auto g1 = group_aggregate(m, {0, 2});
  const auto g2 = group_aggregate(m, {1, 3});
  for (int w = 0; w < 3; ++w) EXPECT_NEAR(g1[w] + g2[w], total[w], 1e-14);
}

TEST(MarketPropertyTest, ExpectationIsBilinear) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MarketModel m = make_model({0.1, 0.4, 0.5}, {{0.0, 0.0, 0.0}});
  const ProbMeasure q = ProbMeasure::create(m, {2.0, 1.0, 0.8});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> r1(3), r2(3);
    for (int w = 0; w < 3; ++w) {
      r1[w] = u(rng);
      r2[w] = u(rng);
    }
    const double a = u(rng), b = u(rng);
    std::vector<double> mix(3);
    for (int w = 0; w < 3; ++w) mix[w] = a * r1[w] + b * r2[w];
    EXPECT_NEAR(expectation(m, q, mix),
                a * expectation(m, q, r1) + b * expectation(m, q, r2), 1e-12);
  }
  EXPECT_NEAR(expectation(m, ProbMeasure::reference(m), {1.0, 1.0, 1.0}), 1.0, 1e-15);
}

TEST(MarketTest, ProbMeasureValidation) {
  const MarketModel m = make_model({0.5, 0.5}, {{0.0, 0.0}});
  EXPECT_THROW(ProbMeasure::create(m, {-0.1, 2.1}), ValidationError);
  EXPECT_THROW(ProbMeasure::create(m, {0.5, 1.3}), NormalizationError);
  const ProbMeasure q = ProbMeasure::create(m, {0.0, 2.0});
  EXPECT_FALSE(q.equivalent_to_reference());
  EXPECT_TRUE(ProbMeasure::reference(m).equivalent_to_reference());
}
