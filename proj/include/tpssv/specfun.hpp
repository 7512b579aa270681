#pragma once

// Jacobi, two-variable Hermite and Laguerre polynomials as direct finite sums.
//
// Degrees are small here (m, n <= ~12 for state quantities), so every family is
// evaluated term by term with compensated summation instead of a recurrence.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace tpssv::specfun {

inline constexpr int kMaxJacobiDegree = 64;
inline constexpr int kMaxHermiteIndex = 32;
inline constexpr int kMaxLaguerreDegree = 64;
inline constexpr int kMaxFactorial = 170;

template <class T>
concept ComplexLike = requires(T z) {
  z.real();
  z.imag();
};

/// Neumaier-compensated accumulator. Works for real and std::complex values
/// (the real and imaginary parts are compensated independently).
template <class T> class CompensatedSum {
public:
  void add(T x) {
    if constexpr (ComplexLike<T>) {
      add_part(re_, cre_, x.real());
      add_part(im_, cim_, x.imag());
    } else {
      add_part(re_, cre_, x);
    }
  }
  CompensatedSum &operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const {
    if constexpr (ComplexLike<T>)
      return T(re_ + cre_, im_ + cim_);
    else
      return re_ + cre_;
  }

private:
  static void add_part(double &sum, double &carry, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

/// x^k for k >= 0 by repeated squaring; ipow(x, 0) == 1 for every x, 0 included.
template <class T> T ipow(T x, int k) {
  T r(1);
  while (k > 0) {
    if (k & 1)
      r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

namespace detail {
inline const std::array<double, kMaxFactorial + 1> &factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxFactorial; ++i)
      t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table;
}

inline void require(bool ok, const std::string &msg) {
  if (!ok)
    throw std::domain_error(msg);
}
} // namespace detail

/// n! for 0 <= n <= 170 (exact up to 22!, correctly rounded products beyond).
inline double factorial(int n) {
  detail::require(n >= 0 && n <= kMaxFactorial, "factorial: argument out of range");
  return detail::factorial_table()[static_cast<std::size_t>(n)];
}

/// Binomial coefficient with real upper index via the falling factorial,
/// C(a, k) = a (a-1) ... (a-k+1) / k!. For a a nonnegative integer smaller
/// than k this is exactly zero.
inline double binomial(double upper, int k) {
  if (k < 0)
    return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) {
    r *= (upper - i) / static_cast<double>(i + 1);
    if (r == 0.0)
      break;
  }
  return r;
}

/// Jacobi polynomial P_m^{(alpha,beta)}(x) from the explicit binomial sum
///   sum_k C(m+alpha, k) C(m+beta, m-k) ((x+1)/2)^k ((x-1)/2)^(m-k).
/// Negative integer alpha/beta are allowed; the binomials then follow the
/// falling-factorial convention.
inline double jacobi_p(int degree, double alpha, double beta, double x) {
  detail::require(degree >= 0 && degree <= kMaxJacobiDegree,
                  "jacobi_p: degree outside [0, 64]");
  if (degree == 0)
    return 1.0;
  const double up = 0.5 * (x + 1.0);
  const double down = 0.5 * (x - 1.0);
  CompensatedSum<double> acc;
  for (int k = 0; k <= degree; ++k) {
    const double c = binomial(degree + alpha, k) * binomial(degree + beta, degree - k);
    if (c == 0.0)
      continue;
    acc += c * ipow(up, k) * ipow(down, degree - k);
  }
  return acc.value();
}

/// Two-variable Hermite polynomial
///   H_{m,n}(x, y) = sum_k (-1)^k m! n! x^(m-k) y^(n-k) / (k! (m-k)! (n-k)!).
/// The first argument pairs with m.
inline std::complex<double> hermite2(int m, int n, std::complex<double> x,
                                     std::complex<double> y) {
  detail::require(m >= 0 && n >= 0 && m <= kMaxHermiteIndex && n <= kMaxHermiteIndex,
                  "hermite2: indices outside [0, 32]");
  const int kmax = std::min(m, n);
  CompensatedSum<std::complex<double>> acc;
  for (int k = 0; k <= kmax; ++k) {
    const double c = factorial(m) * factorial(n) /
                     (factorial(k) * factorial(m - k) * factorial(n - k));
    const std::complex<double> term =
        c * ipow(x, m - k) * ipow(y, n - k);
    acc += (k % 2 == 0) ? term : -term;
  }
  return acc.value();
}

/// Laguerre polynomial L_n(x) = sum_k (-1)^k C(n,k) x^k / k!.
inline double laguerre(int n, double x) {
  detail::require(n >= 0 && n <= kMaxLaguerreDegree, "laguerre: degree outside [0, 64]");
  CompensatedSum<double> acc;
  double xp = 1.0;
  for (int k = 0; k <= n; ++k) {
    const double term = binomial(n, k) * xp / factorial(k);
    acc += (k % 2 == 0) ? term : -term;
    xp *= x;
  }
  return acc.value();
}

} // namespace tpssv::specfun
