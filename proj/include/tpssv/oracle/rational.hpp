#pragma once

// Exact rational evaluation of the Jacobi, two-variable Hermite and Laguerre
// finite sums (arbitrary-precision integers). Slow; meant for tests.

#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace tpssv::oracle {

using Rational = boost::multiprecision::cpp_rational;

/// a + b i with rational parts.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  friend GaussianRational operator+(const GaussianRational &x, const GaussianRational &y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend GaussianRational operator*(const GaussianRational &x, const GaussianRational &y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend GaussianRational operator*(const Rational &c, const GaussianRational &x) {
    return {c * x.re, c * x.im};
  }
  friend bool operator==(const GaussianRational &, const GaussianRational &) = default;
};

inline Rational rational_factorial(int n) {
  if (n < 0)
    throw std::domain_error("rational_factorial: negative argument");
  Rational r{1};
  for (int i = 2; i <= n; ++i)
    r *= i;
  return r;
}

/// Falling-factorial binomial C(upper, k) with integer upper (may be negative).
inline Rational rational_binomial(long upper, int k) {
  if (k < 0)
    return Rational{0};
  Rational r{1};
  for (int i = 0; i < k; ++i)
    r = r * Rational(upper - i) / Rational(i + 1);
  return r;
}

template <class T> T rational_pow(T x, int k) {
  T r{1};
  for (int i = 0; i < k; ++i)
    r = r * x;
  return r;
}

inline GaussianRational rational_pow(GaussianRational x, int k) {
  GaussianRational r{Rational{1}, Rational{0}};
  for (int i = 0; i < k; ++i)
    r = r * x;
  return r;
}

/// P_m^{(alpha, beta)}(x), integer alpha and beta.
inline Rational rational_jacobi(int m, long alpha, long beta, const Rational &x) {
  if (m < 0)
    throw std::domain_error("rational_jacobi: negative degree");
  const Rational up = (x + 1) / 2, down = (x - 1) / 2;
  Rational acc{0};
  for (int k = 0; k <= m; ++k)
    acc += rational_binomial(m + alpha, k) * rational_binomial(m + beta, m - k) *
           rational_pow(up, k) * rational_pow(down, m - k);
  return acc;
}

/// H_{m,n}(x, y) with Gaussian-rational arguments.
inline GaussianRational rational_hermite2(int m, int n, const GaussianRational &x,
                                          const GaussianRational &y) {
  if (m < 0 || n < 0)
    throw std::domain_error("rational_hermite2: negative index");
  GaussianRational acc;
  for (int k = 0; k <= std::min(m, n); ++k) {
    Rational c = rational_factorial(m) * rational_factorial(n) /
                 (rational_factorial(k) * rational_factorial(m - k) * rational_factorial(n - k));
    if (k % 2)
      c = -c;
    acc = acc + c * (rational_pow(x, m - k) * rational_pow(y, n - k));
  }
  return acc;
}

inline Rational rational_laguerre(int n, const Rational &x) {
  if (n < 0)
    throw std::domain_error("rational_laguerre: negative degree");
  Rational acc{0};
  for (int k = 0; k <= n; ++k) {
    Rational t = rational_binomial(n, k) * rational_pow(x, k) / rational_factorial(k);
    acc += (k % 2) ? Rational(-t) : t;
  }
  return acc;
}

inline double to_double(const Rational &r) { return r.convert_to<double>(); }

} // namespace tpssv::oracle
