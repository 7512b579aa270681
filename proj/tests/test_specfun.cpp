#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "tpssv/oracle/rational.hpp"
#include "tpssv/specfun.hpp"
#include "tpssv/verify.hpp"

using namespace tpssv;
using specfun::hermite2;
using specfun::jacobi_p;
using specfun::laguerre;
using cd = std::complex<double>;
using oracle::GaussianRational;
using oracle::Rational;

TEST(Jacobi, DegreeZeroIsOne) {
  for (double a : {0.0, 3.0, -2.0})
    for (double x : {-3.0, 0.2, 1.0, 7.5})
      EXPECT_EQ(jacobi_p(0, a, 0.0, x), 1.0);
}

TEST(Jacobi, DegreeOneLegendre) {
  for (double x : {-2.0, -0.3, 0.0, 1.0, 4.25})
    EXPECT_DOUBLE_EQ(jacobi_p(1, 0, 0, x), x);
}

TEST(Jacobi, MatchesExactRationalSum) {
  const Rational x = Rational(17) / 10;
  EXPECT_NEAR(jacobi_p(3, 2, 1, 1.7), oracle::to_double(oracle::rational_jacobi(3, 2, 1, x)),
              1e-13);
  // negative upper index (falling factorial)
  for (int m = 1; m <= 8; ++m)
    for (long a : {-m - 1L, -1L, -2L, 0L, 3L})
      for (long b : {0L, 1L, 2L}) {
        const Rational xr = Rational(37) / 8; // 4.625
        const double want = oracle::to_double(oracle::rational_jacobi(m, a, b, xr));
        EXPECT_NEAR(jacobi_p(m, a, b, 4.625), want, 1e-12 * std::max(1.0, std::abs(want)))
            << "m=" << m << " a=" << a << " b=" << b;
      }
  EXPECT_EQ(oracle::rational_jacobi(2, 1, 0, Rational(3)), Rational(25));
}

TEST(Jacobi, LegendreRecurrence) {
  for (double x = -10.0; x <= 10.0; x += 0.37) {
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= 20; ++m) {
      const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
      // the explicit sum cancels inside (-1, 1); only x >= 1 is used by the states
      const double tol = std::abs(x) >= 1.0 ? 1e-12 * std::abs(p2) : 1e-10;
      EXPECT_NEAR(jacobi_p(m, 0, 0, x), p2, tol)
          << "m=" << m << " x=" << x;
      p0 = p1;
      p1 = p2;
    }
  }
}

TEST(Jacobi, RejectsDegreeBeyondRange) {
  EXPECT_THROW(jacobi_p(65, 0, 0, 0.5), std::domain_error);
  EXPECT_THROW(jacobi_p(-1, 0, 0, 0.5), std::domain_error);
}

TEST(Hermite2, SpecialValues) {
  const cd x(0.7, -1.2), y(-0.4, 0.9);
  EXPECT_EQ(hermite2(0, 0, x, y), cd(1.0));
  for (int n = 0; n <= 6; ++n) {
    const cd want = specfun::ipow(y, n);
    EXPECT_NEAR(std::abs(hermite2(0, n, x, y) - want), 0.0, 1e-14);
  }
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n) {
      const double want = m == n ? ((m % 2) ? -1.0 : 1.0) * specfun::factorial(m) : 0.0;
      EXPECT_EQ(hermite2(m, n, 0.0, 0.0), cd(want));
    }
  EXPECT_NEAR(std::abs(hermite2(1, 1, x, y) - (x * y - 1.0)), 0.0, 1e-15);
}

TEST(Hermite2, SwapSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 30; ++t) {
    const cd x(u(rng), u(rng)), y(u(rng), u(rng));
    for (int m = 0; m <= 6; ++m)
      for (int n = 0; n <= 6; ++n) {
        const cd a = hermite2(m, n, x, y), b = hermite2(n, m, y, x);
        EXPECT_LE(std::abs(a - b), 1e-13 * std::max(1.0, std::abs(a)));
      }
  }
}

TEST(Hermite2, MatchesGaussianRationalSum) {
  const GaussianRational x{Rational(3, 4), Rational(-1, 2)}, y{Rational(-5, 3), Rational(2, 7)};
  const cd xd(0.75, -0.5), yd(-5.0 / 3.0, 2.0 / 7.0);
  for (int m = 0; m <= 7; ++m)
    for (int n = 0; n <= 7; ++n) {
      const GaussianRational h = oracle::rational_hermite2(m, n, x, y);
      const cd want(oracle::to_double(h.re), oracle::to_double(h.im));
      EXPECT_LE(std::abs(hermite2(m, n, xd, yd) - want), 1e-12 * std::max(1.0, std::abs(want)));
    }
  const GaussianRational zero{};
  EXPECT_EQ(oracle::rational_hermite2(2, 2, zero, zero), (GaussianRational{Rational(2), Rational(0)}));
}

TEST(Hermite2, GeneratingFunction) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 10; ++t) {
    const cd e(u(rng), u(rng)), f(u(rng), u(rng));
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n) {
        const cd h = hermite2(m, n, e, f);
        const cd g = verify::detail::hermite_from_generating_function(m, n, e, f);
        EXPECT_LE(std::abs(g - h) / std::max(1.0, std::abs(h)), 1e-6);
      }
  }
}

TEST(Hermite2, DerivativeIdentity) {
  const double h = 1e-5;
  for (const cd e : {cd(0.3, -0.8), cd(-1.1, 0.4)})
    for (const cd f : {cd(0.9, 0.2), cd(-0.5, -1.3)})
      for (int m = 1; m <= 5; ++m)
        for (int n = 0; n <= 5; ++n) {
          const cd fd = (hermite2(m, n, e + h, f) - hermite2(m, n, e - h, f)) / (2 * h);
          const cd want = double(m) * hermite2(m - 1, n, e, f);
          EXPECT_LE(std::abs(fd - want) / std::max(1.0, std::abs(want)), 1e-6);
        }
}

TEST(Hermite2, RejectsLargeIndices) { EXPECT_THROW(hermite2(33, 0, 1.0, 1.0), std::domain_error); }

TEST(Laguerre, Values) {
  for (double x : {-1.0, 0.0, 2.5, 9.0})
    EXPECT_EQ(laguerre(0, x), 1.0);
  EXPECT_EQ(laguerre(1, 0.0), 1.0);
  EXPECT_NEAR(laguerre(4, 2.5), oracle::to_double(oracle::rational_laguerre(4, Rational(5, 2))), 1e-14);
  EXPECT_NEAR(laguerre(3, 0.5), oracle::to_double(oracle::rational_laguerre(3, Rational(1, 2))), 1e-15);
  for (int n = 0; n <= 20; ++n)
    EXPECT_NEAR(laguerre(n, 3.25), std::laguerre(n, 3.25), 1e-11);
  EXPECT_THROW(laguerre(65, 1.0), std::domain_error);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  specfun::CompensatedSum<double> s;
  s += 1.0;
  for (int i = 0; i < 1000; ++i)
    s += 1e-16;
  s += -1.0;
  EXPECT_NEAR(s.value(), 1e-13, 1e-26); // naive summation returns ~1.1e-13
}

TEST(Binomial, FallingFactorial) {
  EXPECT_EQ(specfun::binomial(5, 2), 10.0);
  EXPECT_EQ(specfun::binomial(2, 3), 0.0);
  EXPECT_EQ(specfun::binomial(-1, 3), -1.0);
  EXPECT_EQ(specfun::binomial(-2, 2), 3.0);
}
