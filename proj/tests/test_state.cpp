#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "tpssv/oracle.hpp"
#include "tpssv/state.hpp"

using namespace tpssv;

TEST(StateSpec, Validation) {
  EXPECT_THROW((StateSpec{0.0, 1, 1}.validate()), ValidationError);
  EXPECT_THROW((StateSpec{-0.2, 0, 0}.validate()), ValidationError);
  EXPECT_THROW((StateSpec{NAN, 0, 0}.validate()), ValidationError);
  EXPECT_THROW((StateSpec{0.5, 11, 0}.validate()), ValidationError);
  EXPECT_THROW((StateSpec{0.5, 0, -1}.validate()), ValidationError);
  EXPECT_NO_THROW((StateSpec{2.0, 10, 10}.validate()));
}

TEST(Normalization, SpecialCases) {
  for (double lam : {0.1, 0.7, 1.9}) {
    EXPECT_NEAR(normalization({lam, 0, 0}), 1.0, 1e-15);
    for (int n = 0; n <= 6; ++n)
      EXPECT_NEAR(normalization({lam, 0, n}) /
                      (specfun::factorial(n) * std::pow(std::sinh(lam), 2 * n)),
                  1.0, 1e-13);
  }
}

TEST(Normalization, FockSumAtDefaultCutoff) {
  const StateSpec s{0.8, 2, 5};
  const double fock = fock_amplitudes(s, 80).norm_squared();
  EXPECT_NEAR(fock / normalization(s), 1.0, 1e-11);
}

TEST(Normalization, ExchangeSymmetry) {
  for (double lam : {0.2, 0.8, 1.5, 2.0})
    for (int m = 0; m <= 10; ++m)
      for (int n = 0; n <= 10; ++n)
        EXPECT_NEAR(normalization({lam, m, n}) / normalization({lam, n, m}), 1.0, 1e-10);
}

TEST(Normalization, FockSumAcrossEnvelope) {
  for (double lam : {0.3, 0.8, 1.5})
    for (int m = 0; m <= 5; ++m)
      for (int n = 0; n <= 5; ++n) {
        const StateSpec s{lam, m, n};
        const int cutoff = std::max(80, default_cutoff(s));
        EXPECT_NEAR(fock_amplitudes(s, cutoff).norm_squared() / normalization(s), 1.0, 1e-9);
      }
}

TEST(Overlap, Values) {
  const StateSpec s{0.6, 1, 1};
  EXPECT_EQ(overlap(s, 1, 2), 0.0);
  EXPECT_DOUBLE_EQ(overlap(s, 0, 0), normalization(s));
  // <lambda, 2, 2 | lambda, 1, 1> from the amplitude tables
  const int N = 60;
  const FockAmplitudes lo = fock_amplitudes(s, N), hi = fock_amplitudes({0.6, 2, 2}, N);
  double sum = 0.0;
  for (int a = 0; a <= N; ++a)
    for (int b = 0; b <= N; ++b)
      sum += hi(a, b) * lo(a, b);
  EXPECT_NEAR(overlap(s, 1, 1) / sum, 1.0, 1e-12);
  EXPECT_THROW(overlap(s, -1, 0), ValidationError);
}

TEST(Overlap, GeneralShiftsAgainstAmplitudes) {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int sh = 0; sh <= 3; ++sh) {
        const StateSpec s{0.5, m, n};
        const int N = 70;
        const FockAmplitudes lo = fock_amplitudes(s, N), hi = fock_amplitudes({0.5, m + sh, n + sh}, N);
        double sum = 0.0;
        for (int a = 0; a <= N; ++a)
          for (int b = 0; b <= N; ++b)
            sum += hi(a, b) * lo(a, b);
        EXPECT_NEAR(overlap(s, sh, sh) / sum, 1.0, 1e-11);
      }
}

TEST(FockAmplitudes, SqueezedVacuum) {
  const double lam = 0.7;
  const FockAmplitudes a = fock_amplitudes({lam, 0, 0}, 40);
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      const double want = i == j ? std::pow(std::tanh(lam), i) / std::cosh(lam) : 0.0;
      EXPECT_NEAR(a(i, j), want, 1e-15);
    }
}

TEST(FockAmplitudes, ZeroOffSupportLine) {
  const StateSpec s{1.0, 2, 5};
  const FockAmplitudes a = fock_amplitudes(s, 90);
  for (int i = 0; i <= 90; ++i)
    for (int j = 0; j <= 90; ++j)
      if (s.m + i != s.n + j)
        EXPECT_EQ(a(i, j), 0.0);
  EXPECT_FALSE(a.normalized());
  EXPECT_NEAR(a.normalized_copy().norm_squared(), 1.0, 1e-12);
}

TEST(FockAmplitudes, MatchesOperatorRoute) {
  const StateSpec s{0.8, 2, 5};
  const int N = 80;
  const FockAmplitudes a = fock_amplitudes(s, N);
  const Eigen::MatrixXcd op = oracle::operator_route_amplitudes(s, N);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j)
      EXPECT_NEAR(std::abs(op(i, j) - a(i, j)), 0.0, 1e-12 * std::max(1.0, std::abs(a(i, j))));
}

TEST(FockAmplitudes, CutoffChecks) {
  EXPECT_THROW(fock_amplitudes({0.5, 3, 4}, 3), CutoffTooSmall);
  try {
    fock_amplitudes({1.5, 5, 5}, 80);
    FAIL() << "expected CutoffTooSmall";
  } catch (const CutoffTooSmall &e) {
    EXPECT_GT(e.required_cutoff, 80);
    EXPECT_NO_THROW(fock_amplitudes({1.5, 5, 5}, e.required_cutoff));
  }
  EXPECT_NO_THROW(fock_amplitudes({1.5, 5, 5}, 80, INFINITY));
  EXPECT_THROW(fock_amplitudes({0.5, 0, 0}, 5000), ResourceLimit);
}

TEST(DefaultCutoff, TailBelowTolerance) {
  for (double lam : {0.1, 0.8, 1.5, 2.0})
    for (int m : {0, 4, 10})
      for (int n : {0, 7, 10}) {
        const StateSpec s{lam, m, n};
        const int c = default_cutoff(s);
        EXPECT_LT(relative_tail_mass(s, c), 1e-12);
        const double kept = fock_amplitudes(s, c).norm_squared() / normalization(s);
        EXPECT_NEAR(kept, 1.0, 1e-11);
      }
}

TEST(Pnd, SqueezedVacuum) {
  const double lam = 1.0;
  for (int k = 0; k < 10; ++k) {
    EXPECT_NEAR(pnd({lam, 0, 0}, k, k),
                std::pow(std::tanh(lam), 2 * k) / std::pow(std::cosh(lam), 2), 1e-15);
    EXPECT_EQ(pnd({lam, 0, 0}, k, k + 1), 0.0);
  }
}

TEST(Pnd, PeakMovesAwayFromVacuum) {
  const StateSpec s{1.0, 2, 5};
  const auto table = pnd_table(s, default_cutoff(s));
  const auto best = std::max_element(table.begin(), table.end(),
                                     [](auto &a, auto &b) { return a.probability < b.probability; });
  EXPECT_GT(best->na + best->nb, 0);
  EXPECT_EQ(best->nb, best->na - 3);
}

TEST(Pnd, SumsToOneAndMatchesAmplitudes) {
  const StateSpec s{0.5, 1, 1};
  const int N = default_cutoff(s);
  const FockAmplitudes a = fock_amplitudes(s, N);
  const double norm = normalization(s);
  double total = 0.0;
  for (const PndEntry &e : pnd_table(s, N)) {
    EXPECT_NEAR(e.probability, a(e.na, e.nb) * a(e.na, e.nb) / norm, 1e-15);
    total += e.probability;
  }
  EXPECT_GE(total, 1.0 - 1e-8);
  EXPECT_LE(total, 1.0 + 1e-14);
}

TEST(DensityMatrix, PureStateProperties) {
  const FockMatrix rho = density_matrix({0.5, 1, 2}, 30);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-8);
  EXPECT_LT(rho.hermiticity_defect(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
  const auto ev = es.eigenvalues();
  EXPECT_NEAR(ev[ev.size() - 1], 1.0, 1e-10);
  for (Eigen::Index i = 0; i + 1 < ev.size(); ++i)
    EXPECT_NEAR(ev[i], 0.0, 1e-10);
  EXPECT_THROW(density_matrix({0.3, 0, 0}, 41), ResourceLimit);
}
