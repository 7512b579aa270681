#include <cmath>

#include <gtest/gtest.h>

#include "tpssv/moments.hpp"
#include "tpssv/oracle.hpp"

using namespace tpssv;

namespace {

struct OracleMoments {
  double na, nb, cross, ab, a2, b2;
  double first_moments; // max |<a>|, |<b>|, |<a^2>|, |<a b+>|
};

OracleMoments from_operators(const StateSpec &s) {
  const int N = default_cutoff(s) + 4;
  const Eigen::VectorXcd psi = oracle::flatten(oracle::operator_route_amplitudes(s, N)).normalized();
  const oracle::LadderMatrices L(N);
  const oracle::SparseOp n_a = L.a_dag() * L.a(), n_b = L.b_dag() * L.b();
  const oracle::SparseOp ab = L.a() * L.b();
  OracleMoments o;
  o.na = oracle::expectation(psi, n_a).real();
  o.nb = oracle::expectation(psi, n_b).real();
  o.cross = oracle::expectation(psi, L.a_dag() * L.b_dag() * ab).real();
  o.ab = oracle::expectation(psi, ab).real();
  o.a2 = oracle::expectation(psi, L.a_dag() * L.a_dag() * L.a() * L.a()).real();
  o.b2 = oracle::expectation(psi, L.b_dag() * L.b_dag() * L.b() * L.b()).real();
  o.first_moments = std::max({std::abs(oracle::expectation(psi, L.a())),
                              std::abs(oracle::expectation(psi, L.b())),
                              std::abs(oracle::expectation(psi, L.a() * L.a())),
                              std::abs(oracle::expectation(psi, L.a() * L.b_dag()))});
  return o;
}

} // namespace

TEST(Moments, SqueezedVacuum) {
  for (double lam : {0.1, 0.5, 1.3}) {
    const MomentSet m = moments({lam, 0, 0});
    EXPECT_NEAR(m.mean_na, std::pow(std::sinh(lam), 2), 1e-13);
    EXPECT_NEAR(m.mean_nb, std::pow(std::sinh(lam), 2), 1e-13);
    EXPECT_NEAR(m.mean_ab, 0.5 * std::sinh(2 * lam), 1e-13);
    EXPECT_DOUBLE_EQ(m.tau, std::cosh(2 * lam));
  }
}

TEST(Moments, MatchOperatorTraces) {
  for (double lam : {0.3, 0.8, 1.5})
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n) {
        const StateSpec s{lam, m, n};
        const OracleMoments o = from_operators(s);
        const MomentSet c = moments(s);
        SCOPED_TRACE(testing::Message() << "lambda=" << lam << " m=" << m << " n=" << n);
        EXPECT_NEAR(c.mean_na / o.na, 1.0, 1e-8);
        EXPECT_NEAR(c.mean_nb / o.nb, 1.0, 1e-8);
        EXPECT_NEAR(c.cross_nanb / o.cross, 1.0, 1e-8);
        EXPECT_NEAR(c.mean_ab / o.ab, 1.0, 1e-8);
        EXPECT_NEAR(factorial_moment_a2(s) / o.a2, 1.0, 1e-8);
        EXPECT_NEAR(factorial_moment_b2(s) / o.b2, 1.0, 1e-8);
        EXPECT_LT(o.first_moments, 1e-10);
      }
}

TEST(Quadratures, SqueezedVacuumAndSingleSubtraction) {
  for (double lam : {0.1, 0.4, 1.0, 2.0}) {
    const QuadratureReport q = quadrature_variances({lam, 0, 0});
    EXPECT_NEAR(q.var_Q, std::exp(2 * lam) / 2, 1e-12 * std::exp(2 * lam));
    EXPECT_NEAR(q.var_P, std::exp(-2 * lam) / 2, 1e-13);
    EXPECT_NEAR(q.uncertainty_product, 0.25, 1e-13);
    const QuadratureReport q1 = quadrature_variances({lam, 0, 1});
    EXPECT_NEAR(q1.var_Q, std::exp(2 * lam), 1e-12 * std::exp(2 * lam));
    EXPECT_NEAR(q1.var_P, std::exp(-2 * lam), 1e-13);
    EXPECT_NEAR(q1.uncertainty_product, 1.0, 1e-12);
    EXPECT_EQ(q1.p_squeezed, lam > 0.5 * std::log(2.0));
  }
}

TEST(Quadratures, EqualSubtractionAlwaysSqueezed) {
  for (int mn : {1, 2, 8})
    for (int k = 1; k <= 40; ++k) {
      const QuadratureReport q = quadrature_variances({0.05 * k, mn, mn});
      EXPECT_LT(q.var_P, 0.5);
      EXPECT_TRUE(q.p_squeezed);
    }
}

TEST(Quadratures, Heisenberg) {
  for (double lam = 0.05; lam <= 2.0; lam += 0.15)
    for (int m = 0; m <= 10; m += 2)
      for (int n = 0; n <= 10; n += 3)
        EXPECT_GE(quadrature_variances({lam, m, n}).uncertainty_product, 0.25 - 1e-12);
}

TEST(CrossCorrelation, AboveOneOnSampledSet) {
  for (auto [m, n] : {std::pair{1, 2}, {3, 4}, {2, 4}, {6, 8}, {3, 6}, {7, 10}})
    for (int k = 1; k <= 40; ++k)
      EXPECT_GT(cross_correlation({0.05 * k, m, n}), 1.0) << m << "," << n;
  EXPECT_GT(cross_correlation({0.5, 1, 2}), 1.0);
}

TEST(CrossCorrelation, ExchangeAndOracle) {
  for (double lam : {0.3, 1.1})
    EXPECT_NEAR(cross_correlation({lam, 1, 3}), cross_correlation({lam, 3, 1}), 1e-10);
  const OracleMoments o = from_operators({0.7, 0, 0});
  EXPECT_NEAR(cross_correlation({0.7, 0, 0}), o.cross / (o.na * o.nb), 1e-9);
}

TEST(Antibunching, KnownForms) {
  for (double lam : {0.2, 0.55, 1.4}) {
    EXPECT_NEAR(antibunching({lam, 0, 0}), -1.0 / std::cosh(2 * lam), 1e-13);
    const double c2 = std::cosh(2 * lam);
    EXPECT_NEAR(antibunching({lam, 0, 2}),
                (5 - 3 * c2) / (6 * (1 + 2 * c2)) / std::pow(std::sinh(lam), 2), 1e-12);
  }
  EXPECT_GT(antibunching({0.5, 0, 2}) * antibunching({0.6, 0, 2}) * -1.0, 0.0);
  EXPECT_LT(antibunching({0.56, 0, 2}), 0.0);
  EXPECT_GT(antibunching({0.54, 0, 2}), 0.0);
}

TEST(Antibunching, MatchesOperators) {
  const StateSpec s{0.7, 1, 1};
  const OracleMoments o = from_operators(s);
  EXPECT_NEAR(antibunching(s), (o.a2 + o.b2) / (2 * o.cross) - 1.0, 1e-9);
}
