#include <gtest/gtest.h>

#include <cmath>

#include "daa/selfish_math.hpp"
#include "oracles.hpp"

using namespace daa;

TEST(SuccessProb, MatchesWorkedValues) {
  EXPECT_NEAR(success_prob(1, 0, 1.0 / 3.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(success_prob(2, 1, 0.4), 0.096, 1e-15);
  EXPECT_NEAR(success_prob(2, 0, 0.4), 0.16, 1e-15);
}

TEST(SuccessProb, RejectsMAtLeastL) {
  EXPECT_THROW(success_prob(2, 2, 0.3), DomainError);
  EXPECT_THROW(success_prob(2, 5, 0.3), DomainError);
}

TEST(SuccessProb, LogSpaceAgreesWithExactNearTheSwitch) {
  // L + m = 60 is exact, 61 goes through lgamma; the recurrence
  // P_s(L, m+1) = P_s(L, m) * beta * (L+m)/(m+1) * (L-m-1)/(L-m) links them.
  const double alpha = 0.3;
  const unsigned length = 31;
  const double exact = success_prob(length, 29, alpha);
  const double stepped = exact * (1 - alpha) * (length + 29.0) / 30.0 * (length - 30.0) / (length - 29.0);
  EXPECT_NEAR(success_prob(length, 30, alpha) / stepped, 1.0, 1e-12);
}

TEST(SuccessProb, LargeArgumentsStayFinite) {
  const double v = success_prob(150, 49, 0.45);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1.0);
}

TEST(UnsuccessProb, MatchesWorkedValues) {
  EXPECT_NEAR(unsuccess_prob(0, 0.3), 0.7, 1e-15);
  EXPECT_NEAR(unsuccess_prob_captured(1, 1, 0.3, 0.5), 0.0735, 1e-15);
  EXPECT_NEAR(unsuccess_prob(2, 0.3), 2 * 0.09 * 0.343, 1e-15);
  EXPECT_THROW(unsuccess_prob_captured(2, 3, 0.3, 0.5), DomainError);
}

TEST(UnsuccessProb, CapturedSplitSumsToTotal) {
  for (double gamma : {0.0, 0.3, 0.77, 1.0}) {
    for (unsigned n = 0; n <= 30; ++n) {
      double sum = 0.0;
      for (unsigned i = 0; i <= n; ++i) sum += unsuccess_prob_captured(n, i, 0.3, gamma);
      EXPECT_NEAR(sum, unsuccess_prob(n, 0.3), 1e-14) << "n=" << n << " gamma=" << gamma;
    }
  }
}

TEST(CycleExpectations, HonestDepthIsHonest) {
  const auto c = cycle_expectations(AttackParams(0.3, 0.5, Depth{1}));
  EXPECT_NEAR(c.rho, 0.3, 1e-14);
  EXPECT_NEAR(c.delta, 1.0, 1e-14);
  EXPECT_NEAR(c.t_b, 1.0, 1e-14);
  EXPECT_NEAR(c.t_o, 1.0, 1e-14);
}

TEST(CycleExpectations, ClassicSelfishThreshold) {
  EXPECT_NEAR(revenue_ratio(AttackParams(1.0 / 3.0, 0.0, Depth{2})), 1.0 / 3.0, 1e-12);
}

TEST(CycleExpectations, DepthTwoMatchesClassicClosedForm) {
  for (double alpha : {0.05, 0.1, 0.2, 0.3, 0.35, 0.45, 0.49}) {
    for (double gamma : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      EXPECT_NEAR(revenue_ratio(AttackParams(alpha, gamma, Depth{2})),
                  oracle::classic_selfish_revenue(alpha, gamma), 1e-12)
          << alpha << "," << gamma;
    }
  }
}

TEST(CycleExpectations, MatchesBlockByBlockPropagation) {
  struct Case {
    double alpha, gamma;
    unsigned length;  // 0 = unbounded
  };
  for (const Case& k : {Case{0.1, 0.0, 2}, Case{0.3, 0.5, 3}, Case{0.4, 0.4, 5}, Case{0.25, 1.0, 4},
                        Case{0.2, 0.7, 0}, Case{0.3, 0.3, 0}, Case{0.45, 0.9, 7}}) {
    const Depth depth = k.length == 0 ? Depth::unbounded() : Depth{k.length};
    const auto c = cycle_expectations(AttackParams(k.alpha, k.gamma, depth));
    const auto o = oracle::propagate_cycle(k.alpha, k.gamma, k.length);
    ASSERT_LT(o.leftover_mass, 1e-15);
    EXPECT_NEAR(c.e_la_s, o.la_s, 1e-10);
    EXPECT_NEAR(c.e_lh_s, o.lh_s, 1e-10);
    EXPECT_NEAR(c.e_la_u, o.la_u, 1e-10);
    EXPECT_NEAR(c.e_lh_u, o.lh_u, 1e-10);
    EXPECT_NEAR(c.e_la_captured, o.captured, 1e-10);
    EXPECT_NEAR(c.rho, o.rho(), 1e-10);
    EXPECT_NEAR(c.delta, o.delta(), 1e-10);
  }
}

TEST(CycleExpectations, CapturedSeriesMatchesDirectDoubleSum) {
  const double alpha = 0.35;
  const double gamma = 0.6;
  const unsigned length = 12;
  double direct = 0.0;
  for (unsigned m = 0; m < length; ++m)
    for (unsigned i = 0; i <= m; ++i) direct += i * unsuccess_prob_captured(m, i, alpha, gamma);
  EXPECT_NEAR(cycle_expectations(AttackParams(alpha, gamma, Depth{length})).e_la_captured, direct, 1e-14);
}

TEST(CycleExpectations, FieldIdentities) {
  for (double alpha : {0.05, 0.2, 0.4, 0.49}) {
    for (unsigned length : {1u, 2u, 5u, 20u, 0u}) {
      const Depth depth = length ? Depth{length} : Depth::unbounded();
      const auto c = cycle_expectations(AttackParams(alpha, 0.5, depth));
      EXPECT_NEAR(c.t_b, c.e_la_s + c.e_la_u + c.e_lh_s + c.e_lh_u, 1e-12);
      EXPECT_NEAR(c.t_o, c.e_la_s + c.e_lh_u, 1e-12);
      EXPECT_NEAR(c.rho * c.t_o, c.e_la_s + c.e_la_captured, 1e-12);
      EXPECT_LE(c.e_la_captured, c.e_la_u + 1e-15);
      EXPECT_GE(c.delta, 1.0 - 1e-15);
      EXPECT_GE(c.rho, 0.0);
      EXPECT_LE(c.rho, 1.0);
    }
  }
}

TEST(CycleExpectations, UnboundedHasNoSuccessBranch) {
  const auto c = cycle_expectations(AttackParams(0.3, 0.5, Depth::unbounded()));
  EXPECT_EQ(c.e_la_s, 0.0);
  EXPECT_EQ(c.e_lh_s, 0.0);
  EXPECT_GT(c.terms, 10u);
}

TEST(CycleExpectations, UnboundedConvergesAtGridEdge) {
  const auto c = cycle_expectations(AttackParams(0.495, 0.5, Depth::unbounded()));
  EXPECT_TRUE(std::isfinite(c.rho));
  EXPECT_LE(c.terms, kSeriesTermCap);
}

TEST(CycleExpectations, UnboundedReportsNonConvergenceNearHalf) {
  EXPECT_THROW(cycle_expectations(AttackParams(0.4999, 0.5, Depth::unbounded())), ConvergenceError);
  EXPECT_NO_THROW(cycle_expectations(AttackParams(0.4999, 0.5, Depth(40))));
}

TEST(Params, RejectsOutOfDomain) {
  EXPECT_THROW(NetworkParams(0.0, 0.5), DomainError);
  EXPECT_THROW(NetworkParams(0.5, 0.5), DomainError);
  EXPECT_THROW(NetworkParams(0.3, 1.1), DomainError);
  EXPECT_THROW(NetworkParams(0.3, -0.1), DomainError);
  EXPECT_THROW(Depth{0}, DomainError);
  EXPECT_THROW(Depth::parse("0"), DomainError);
  EXPECT_THROW(Depth::parse("abc"), DomainError);
  EXPECT_TRUE(Depth::parse("inf").is_unbounded());
  EXPECT_EQ(Depth::parse("7").length(), 7u);
  EXPECT_EQ(Depth::unbounded().to_string(), "inf");
}

TEST(OptimalDepth, ReferencePoints) {
  EXPECT_EQ(optimal_depth(0.4, 0.4), Depth{5});
  EXPECT_TRUE(optimal_depth(0.1, 0.9).is_unbounded());
  EXPECT_EQ(optimal_depth(0.1, 0.0), Depth{1});
}

TEST(OptimalDepth, AgreesWithExhaustiveScan) {
  for (double alpha : {0.1, 0.2, 0.3, 0.35, 0.4, 0.45}) {
    for (double gamma : {0.0, 0.3, 0.6, 1.0}) {
      const NetworkParams network(alpha, gamma);
      double best = -1.0;
      for (unsigned length = 1; length <= 64; ++length) {
        best = std::max(best, revenue_ratio(AttackParams(network, Depth{length})));
      }
      best = std::max(best, revenue_ratio(AttackParams(network, Depth::unbounded())));
      const Depth d = optimal_depth(alpha, gamma);
      EXPECT_NEAR(revenue_ratio(AttackParams(network, d)), best, 1e-10) << alpha << "," << gamma;
    }
  }
}

TEST(OptimalDepth, RejectsTinyLMax) { EXPECT_THROW(optimal_depth(0.3, 0.5, 1), DomainError); }
