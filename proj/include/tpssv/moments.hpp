#pragma once

// Closed-form moments of the normalized state. Every quantity is a ratio of
// Jacobi polynomials at tau = cosh(2 lambda) over P_m^{(n-m,0)}(tau).

#include <cmath>

#include "tpssv/specfun.hpp"
#include "tpssv/state.hpp"

namespace tpssv {

struct MomentSet {
  double mean_na = 0.0;    // <a+ a>
  double mean_nb = 0.0;    // <b+ b>
  double cross_nanb = 0.0; // <a+ b+ a b>
  double mean_ab = 0.0;    // <a b> = <a+ b+>
  double tau = 0.0;        // cosh(2 lambda)
};

struct QuadratureReport {
  double var_Q = 0.0;
  double var_P = 0.0;
  double uncertainty_product = 0.0;
  bool p_squeezed = false; // strict var_P < 1/2, no tolerance band
};

namespace detail {
struct JacobiAtTau {
  double tau;
  int m, n;
  double operator()(int degree, int alpha_shift, int beta) const {
    return specfun::jacobi_p(degree, n - m + alpha_shift, beta, tau);
  }
};
} // namespace detail

inline MomentSet moments(const StateSpec &s) {
  s.validate();
  const double tau = std::cosh(2.0 * s.lambda);
  const double sh2 = std::pow(std::sinh(s.lambda), 2);
  const detail::JacobiAtTau P{tau, s.m, s.n};
  const double p0 = P(s.m, 0, 0);
  const int m = s.m, n = s.n;

  MomentSet r;
  r.tau = tau;
  r.mean_na = (m + 1) * P(m + 1, -1, 0) / p0;
  r.mean_nb = (n + 1) * sh2 * P(m, 1, 0) / p0;
  r.cross_nanb = (m + 1.0) * (n + 1.0) * sh2 * P(m + 1, 0, 0) / p0;
  r.mean_ab = 0.5 * (n + 1) * P(m, 0, 1) / p0 * std::sinh(2.0 * s.lambda);
  return r;
}

/// <a+^2 a^2> = (m+1)(m+2) P_{m+2}^{(n-m-2,0)} / P_m^{(n-m,0)}.
inline double factorial_moment_a2(const StateSpec &s) {
  s.validate();
  const detail::JacobiAtTau P{std::cosh(2.0 * s.lambda), s.m, s.n};
  return (s.m + 1.0) * (s.m + 2.0) * P(s.m + 2, -2, 0) / P(s.m, 0, 0);
}

/// <b+^2 b^2> = (n+1)(n+2) sinh^4(lambda) P_m^{(n-m+2,0)} / P_m^{(n-m,0)}.
inline double factorial_moment_b2(const StateSpec &s) {
  s.validate();
  const detail::JacobiAtTau P{std::cosh(2.0 * s.lambda), s.m, s.n};
  return (s.n + 1.0) * (s.n + 2.0) * std::pow(std::sinh(s.lambda), 4) * P(s.m, 2, 0) /
         P(s.m, 0, 0);
}

/// Variances of Q = (Q1+Q2)/sqrt2 and P = (P1+P2)/sqrt2; first moments vanish.
inline QuadratureReport quadrature_variances(const StateSpec &s) {
  const MomentSet mom = moments(s);
  QuadratureReport q;
  q.var_Q = 0.5 * (mom.mean_na + mom.mean_nb + 2.0 * mom.mean_ab + 1.0);
  q.var_P = 0.5 * (mom.mean_na + mom.mean_nb - 2.0 * mom.mean_ab + 1.0);
  q.uncertainty_product = q.var_Q * q.var_P;
  q.p_squeezed = q.var_P < 0.5;
  return q;
}

/// g12 = <a+ b+ a b> / (<a+ a><b+ b>).
inline double cross_correlation(const StateSpec &s) {
  const MomentSet mom = moments(s);
  return mom.cross_nanb / (mom.mean_na * mom.mean_nb);
}

/// R_ab = (<a+^2 a^2> + <b+^2 b^2>) / (2 <a+ a b+ b>) - 1; negative means antibunching.
inline double antibunching(const StateSpec &s) {
  const MomentSet mom = moments(s);
  return (factorial_moment_a2(s) + factorial_moment_b2(s)) / (2.0 * mom.cross_nanb) - 1.0;
}

} // namespace tpssv
