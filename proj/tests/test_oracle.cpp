#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tpssv/oracle.hpp"
#include "tpssv/verify.hpp"

using namespace tpssv;
using namespace tpssv::oracle;

TEST(Ladder, CommutatorOnInterior) {
  const LadderMatrices L(25);
  const Eigen::MatrixXcd a = L.mode_lower();
  const Eigen::MatrixXcd c = a * a.adjoint() - a.adjoint() * a;
  const Eigen::Index d = c.rows();
  EXPECT_LT((c.topLeftCorner(d - 1, d - 1) - Eigen::MatrixXcd::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff(),
            1e-13);
  // two-mode operators commute across modes
  const SparseOp ab = L.a() * L.b_dag(), ba = L.b_dag() * L.a();
  EXPECT_LT(Eigen::MatrixXcd(ab - ba).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(LadderMatrices(0), ValidationError);
}

TEST(Ladder, PowerAndBoundary) {
  const LadderMatrices L(6);
  const Eigen::MatrixXcd a3 = power(L.mode_lower(), 3);
  EXPECT_NEAR(std::abs(a3(0, 3)), std::sqrt(6.0), 1e-14);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(49);
  v[6 * 7 + 0] = 1.0;
  EXPECT_EQ(boundary_weight(v, 6, 1), 1.0);
  v.setZero();
  v[3 * 7 + 3] = 1.0;
  EXPECT_EQ(boundary_weight(v, 6, 2), 0.0);
}

TEST(Expectation, BasicValues) {
  const FockMatrix rho = density_matrix({0.6, 0, 0}, 30);
  const LadderMatrices L(30);
  EXPECT_NEAR(expectation(rho, L.identity()).real(), 1.0, 1e-12);
  EXPECT_NEAR(expectation(rho, L.a_dag() * L.a()).real(), std::pow(std::sinh(0.6), 2), 1e-9);
  const std::complex<double> h = expectation(rho, L.a_dag() * L.a() + L.b_dag() * L.b());
  EXPECT_LT(std::abs(h.imag()), 1e-12);
  EXPECT_THROW(expectation(rho, LadderMatrices(10).a()), ValidationError);
}

TEST(Expectation, PureAndMixedAgree) {
  const StateSpec s{0.5, 1, 2};
  const FockMatrix rho = density_matrix(s, 35);
  const Eigen::VectorXcd psi = fock_amplitudes(s, 35).to_vector();
  const LadderMatrices L(35);
  const SparseOp op = L.a_dag() * L.b_dag() * L.a() * L.b();
  EXPECT_NEAR(expectation(rho, op).real(), expectation(psi, op).real(), 1e-11);
  const MomentSet mom = moments(s);
  EXPECT_NEAR(expectation(rho, op).real() / mom.cross_nanb, 1.0, 1e-8);
}

TEST(WignerOperator, HermitianWithVacuumElement) {
  const std::complex<double> alpha{0.4, -0.7};
  const Eigen::MatrixXcd D = wigner_operator(60, alpha);
  EXPECT_LT((D - D.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  // single-mode Wigner function of the vacuum
  EXPECT_NEAR(D(0, 0).real(), std::exp(-2 * std::norm(alpha)) / std::numbers::pi, 1e-15);
  EXPECT_NEAR(D(0, 0).imag(), 0.0, 1e-15);
  EXPECT_THROW(wigner_operator(10, {2.0, 0.0}), ResourceLimit);
}

TEST(WignerOracle, VacuumAndSqueezedVacuum) {
  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(8, 8);
  vac(0, 0) = 1.0;
  EXPECT_NEAR(wigner_oracle(vac, {}), 1.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
  std::mt19937_64 rng(1);
  const double lam = 0.5;
  const FockMatrix rho = density_matrix({lam, 0, 0}, 40);
  for (const PhasePoint &pt : verify::detail::random_points(rng, 8, 1.5)) {
    const SqueezedFrame f = SqueezedFrame::of(lam, pt);
    const double want = std::exp(-2 * std::norm(f.alpha_bar) - 2 * std::norm(f.beta_bar)) /
                        (std::numbers::pi * std::numbers::pi);
    EXPECT_NEAR(wigner_oracle(rho, pt), want, 1e-10);
  }
}

TEST(WignerOracle, Normalization) {
  // q1 p1 q2 p2 Riemann sum of the oracle for the squeezed vacuum; the oracle
  // factorizes over modes for a product test state, so use |1>|0> as well.
  const double lam = 0.3;
  const Eigen::MatrixXcd psi = operator_route_amplitudes({lam, 0, 0}, 24);
  const int pts = 17;
  const double half = 4.0, h = 2 * half / (pts - 1);
  double sum = 0.0;
  for (int a = 0; a < pts; ++a)
    for (int b = 0; b < pts; ++b)
      for (int c = 0; c < pts; ++c)
        for (int d = 0; d < pts; ++d) {
          const PhasePoint pt = PhasePoint::from_quadratures(-half + a * h, -half + b * h,
                                                             -half + c * h, -half + d * h);
          if (4 * std::max(std::norm(pt.alpha), std::norm(pt.beta)) > 24)
            continue; // outside the oracle's range; the Gaussian is ~0 there
          sum += wigner_oracle(psi, pt);
        }
  EXPECT_NEAR(sum * h * h * h * h, 1.0, 0.01);
}

TEST(OperatorRoute, MatchesFormulaRoute) {
  for (const StateSpec &s : {StateSpec{0.8, 2, 5}, StateSpec{0.4, 3, 0}, StateSpec{1.0, 1, 1}}) {
    const int N = 70;
    const Eigen::MatrixXcd op = operator_route_amplitudes(s, N);
    const FockAmplitudes fa = fock_amplitudes(s, N, INFINITY);
    double worst = 0.0;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j)
        worst = std::max(worst, std::abs(op(i, j) - fa(i, j)) / std::max(1.0, std::abs(fa(i, j))));
    EXPECT_LT(worst, 1e-12);
  }
}

TEST(OperatorRoute, PureDensity) {
  const FockMatrix rho = pure_density(operator_route_amplitudes({0.5, 1, 0}, 20));
  EXPECT_NEAR(rho.trace(), 1.0, 1e-14);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
}
