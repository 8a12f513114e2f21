#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace sorte;

TEST(UtilityTest, ExponentialAtZero) {
  const AgentUtility au = AgentUtility::exponential(1.0);
  EXPECT_DOUBLE_EQ(au.u(0.0), 0.0);
  EXPECT_DOUBLE_EQ(au.u_prime(0.0), 1.0);
}

TEST(UtilityTest, ExponentialValue) {
  const AgentUtility au = AgentUtility::exponential(2.0);
  const double expected = 1.0 - std::exp(-0.4621);
  EXPECT_NEAR(au.u(0.23105), expected, 1e-15);
  EXPECT_NEAR(au.u(0.23105), 0.37004, 5e-6);
}

TEST(UtilityPropertyTest, StrictlyIncreasing) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  const AgentUtility au = AgentUtility::exponential(0.7, 1.3);
  for (int trial = 0; trial < 100; ++trial) {
    double x1 = u(rng), x2 = u(rng);
    if (x1 == x2) continue;
    if (x1 > x2) std::swap(x1, x2);
    EXPECT_LT(au.u(x1), au.u(x2));
  }
}

TEST(UtilityTest, ConjugateAtOne) {
  const AgentUtility au = AgentUtility::exponential(1.0);
  EXPECT_DOUBLE_EQ(au.v(1.0), 0.0);
  EXPECT_DOUBLE_EQ(au.v_prime(1.0), 0.0);
}

TEST(UtilityTest, ConjugateDerivativeExample) {
  const AgentUtility au = AgentUtility::exponential(2.0);
  EXPECT_DOUBLE_EQ(au.v_prime(2.0), 0.0);  // 0.5 * ln(2/2)
}

TEST(UtilityTest, ConjugateDomainErrors) {
  const AgentUtility au = AgentUtility::exponential(1.0);
  EXPECT_THROW(au.v(-1.0), DomainError);
  EXPECT_THROW(au.v_prime(0.0), DomainError);
  EXPECT_DOUBLE_EQ(au.v(0.0), 1.0);  // v(0) = u(+inf)
}

TEST(UtilityPropertyTest, FenchelInequality) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> xs(-8.0, 8.0);
  std::uniform_real_distribution<double> es(-4.0, 4.0);
  for (double alpha : {0.4, 1.0, 2.3}) {
    const AgentUtility au = AgentUtility::exponential(alpha, 1.7);
    for (int trial = 0; trial < 60; ++trial) {
      const double x = xs(rng);
      const double y = std::pow(10.0, es(rng));
      EXPECT_GE(au.v(y) + 1e-12, au.u(x) - x * y);
    }
  }
}

TEST(UtilityPropertyTest, ConjugacyIdentitiesOnGrid) {
  for (double alpha : {0.3, 1.0, 2.5}) {
    for (double gamma : {1.0, 2.0, 0.4}) {
      const AgentUtility au = AgentUtility::exponential(alpha, gamma);
      for (double e = -6.0; e <= 6.0; e += 0.25) {
        const double y = std::pow(10.0, e);
        const double vp = au.v_prime(y);
        const double lhs = au.u(-vp);
        const double rhs = au.v(y) - y * vp;
        EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::fabs(rhs)));
        EXPECT_NEAR(au.u_prime(-vp), y, 1e-10 * (1.0 + y));
      }
    }
  }
}

TEST(UtilityPropertyTest, ConjugateIsConvex) {
  const AgentUtility au = AgentUtility::exponential(1.6, 0.9);
  for (double e = -5.0; e <= 5.0; e += 0.25) {
    const double y = std::pow(10.0, e);
    const double h = 1e-4 * y;
    const double second = (au.v(y + h) - 2.0 * au.v(y) + au.v(y - h)) / (h * h);
    EXPECT_GE(second, -1e-9);
  }
}

TEST(UtilityTest, OverflowGuardKeepsValuesFinite) {
  const AgentUtility au = AgentUtility::exponential(3.0);
  EXPECT_TRUE(std::isfinite(au.u(-1e6)));
  EXPECT_TRUE(std::isfinite(au.u_prime(-1e6)));
  EXPECT_TRUE(std::isfinite(au.u(1e6)));
}

TEST(UtilityTest, ApplyWeightsIdentity) {
  const UtilityProfile base = UtilityProfile::exponential({1.0, 2.0});
  const UtilityProfile same = apply_weights(base, {1.0, 1.0});
  for (double x : {-1.0, 0.0, 2.5}) {
    EXPECT_DOUBLE_EQ(same[0].u(x), base[0].u(x));
    EXPECT_DOUBLE_EQ(same[1].v(std::fabs(x) + 0.1), base[1].v(std::fabs(x) + 0.1));
  }
}

TEST(UtilityTest, WeightedExponentialPointwiseForm) {
  // gamma * (1 - e^{-alpha x}) equals gamma - exp(-alpha [x - ln(gamma)/alpha]).
  const double alpha = 1.7, gamma = 3.2;
  const AgentUtility au = AgentUtility::exponential(alpha, gamma);
  for (double x : {-2.0, -0.3, 0.0, 1.1, 4.0}) {
    const double translated = gamma - std::exp(-alpha * (x - std::log(gamma) / alpha));
    EXPECT_NEAR(au.u(x), translated, 1e-12 * (1.0 + std::fabs(translated)));
  }
}

TEST(UtilityTest, WeightedConjugacyStillHolds) {
  const UtilityProfile weighted = apply_weights(UtilityProfile::exponential({0.8, 2.2}),
                                                {0.5, 4.0});
  for (int n = 0; n < weighted.size(); ++n) {
    for (double e = -5.0; e <= 5.0; e += 0.5) {
      const double y = std::pow(10.0, e);
      const double vp = weighted[n].v_prime(y);
      EXPECT_NEAR(weighted[n].u(-vp), weighted[n].v(y) - y * vp,
                  1e-10 * (1.0 + std::fabs(weighted[n].v(y))));
    }
  }
}

TEST(UtilityTest, ApplyWeightsRejectsNonpositive) {
  const UtilityProfile base = UtilityProfile::exponential({1.0});
  EXPECT_THROW(apply_weights(base, {0.0}), DomainError);
  EXPECT_THROW(apply_weights(base, {-1.0}), DomainError);
}

TEST(UtilityTest, CustomFamilyAccepted) {
  const double alpha = 1.3;
  const AgentUtility custom = AgentUtility::custom(
      [alpha](double x) { return 1.0 - sorte::numerics::clamped_exp(-alpha * x); },
      [alpha](double x) { return alpha * sorte::numerics::clamped_exp(-alpha * x); },
      [alpha](double y) { return 1.0 - y / alpha + (y / alpha) * std::log(y / alpha); },
      [alpha](double y) { return std::log(y / alpha) / alpha; });
  const AgentUtility builtin = AgentUtility::exponential(alpha);
  for (double x : {-2.0, 0.0, 1.5}) EXPECT_NEAR(custom.u(x), builtin.u(x), 1e-12);
  for (double y : {0.1, 1.0, 7.0}) {
    EXPECT_NEAR(custom.v(y), builtin.v(y), 1e-12);
    EXPECT_NEAR(custom.v_prime(y), builtin.v_prime(y), 1e-12);
  }
}

TEST(UtilityTest, CustomFamilyWithInconsistentConjugateRejected) {
  const double alpha = 1.3;
  EXPECT_THROW(AgentUtility::custom(
                   [alpha](double x) { return 1.0 - sorte::numerics::clamped_exp(-alpha * x); },
                   [alpha](double x) { return alpha * sorte::numerics::clamped_exp(-alpha * x); },
                   [alpha](double y) { return 1.0 - y / alpha + (y / alpha) * std::log(y / alpha); },
                   [alpha](double y) { return std::log(y / alpha) / alpha + 0.05; }),
               ValidationError);
}

TEST(UtilityTest, CustomFamilyOnHalfLineRejected) {
  // Log-type utility: u(x)/x does not diverge as x -> -inf (it is not even
  // defined there); the registration growth check rejects it.
  EXPECT_THROW(AgentUtility::custom([](double x) { return x; }, [](double) { return 1.0; },
                                    [](double) { return 0.0; }, [](double) { return 0.0; }),
               ValidationError);
}
