#pragma once

// Brute-force machinery in a truncated two-mode Fock basis, independent of the
// closed forms: ladder matrices, expectation values, displaced-parity Wigner
// values and an operator-built state. Nothing in here calls specfun.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include "tpssv/errors.hpp"
#include "tpssv/state.hpp"
#include "tpssv/wigner.hpp"

namespace tpssv::oracle {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;
using DenseOp = Eigen::MatrixXcd;

/// Single-mode and two-mode ladder operators on 0..cutoff per mode, flattened
/// as n_a * (cutoff+1) + n_b.
class LadderMatrices {
public:
  explicit LadderMatrices(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 1 || cutoff > kMaxCutoff)
      throw ValidationError("LadderMatrices: cutoff outside [1, 4000]");
    const int d = cutoff + 1;
    std::vector<Eigen::Triplet<std::complex<double>>> t;
    for (int k = 1; k < d; ++k)
      t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    lower_.resize(d, d);
    lower_.setFromTriplets(t.begin(), t.end());
    id1_.resize(d, d);
    id1_.setIdentity();
    a_ = Eigen::kroneckerProduct(lower_, id1_);
    b_ = Eigen::kroneckerProduct(id1_, lower_);
    a_.makeCompressed();
    b_.makeCompressed();
    ad_ = a_.adjoint();
    bd_ = b_.adjoint();
  }

  int cutoff() const { return cutoff_; }
  Eigen::Index dim() const { return a_.rows(); }

  const SparseOp &mode_lower() const { return lower_; }
  const SparseOp &a() const { return a_; }
  const SparseOp &b() const { return b_; }
  const SparseOp &a_dag() const { return ad_; }
  const SparseOp &b_dag() const { return bd_; }
  SparseOp identity() const {
    SparseOp I(dim(), dim());
    I.setIdentity();
    return I;
  }

private:
  int cutoff_;
  SparseOp lower_, id1_, a_, b_, ad_, bd_;
};

inline SparseOp power(const SparseOp &op, int k) {
  SparseOp r(op.rows(), op.cols());
  r.setIdentity();
  for (int i = 0; i < k; ++i)
    r = (r * op).pruned();
  return r;
}

/// Weight |psi|^2 in the outer `layers` shells (n_a or n_b > cutoff - layers).
/// An operator product of total raising order `layers` is only trustworthy
/// when this is negligible.
inline double boundary_weight(const Eigen::VectorXcd &psi, int cutoff, int layers) {
  const int d = cutoff + 1;
  if (psi.size() != static_cast<Eigen::Index>(d) * d)
    throw ValidationError("boundary_weight: vector size does not match cutoff");
  double w = 0.0;
  for (int na = 0; na < d; ++na)
    for (int nb = 0; nb < d; ++nb)
      if (na > cutoff - layers || nb > cutoff - layers)
        w += std::norm(psi[static_cast<Eigen::Index>(na) * d + nb]);
  return w;
}

/// Tr[rho op].
inline std::complex<double> expectation(const FockMatrix &rho, const SparseOp &op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim())
    throw ValidationError("expectation: operator dimension does not match density matrix");
  std::complex<double> tr = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOp::InnerIterator it(op, k); it; ++it)
      tr += rho.matrix()(it.col(), it.row()) * it.value();
  return tr;
}

/// <psi| op |psi> / <psi|psi>.
inline std::complex<double> expectation(const Eigen::VectorXcd &psi, const SparseOp &op) {
  if (op.rows() != psi.size() || op.cols() != psi.size())
    throw ValidationError("expectation: operator dimension does not match state vector");
  const Eigen::VectorXcd opsi = op * psi;
  return psi.dot(opsi) / psi.squaredNorm();
}

// ---------------------------------------------------------------------------
// Displaced parity

/// <p| D(gamma) |q> from the associated-Laguerre closed form.
inline std::complex<double> displacement_element(int p, int q, std::complex<double> gamma) {
  const double x = std::norm(gamma);
  const double env = std::exp(-0.5 * x);
  if (p >= q) {
    const double f = std::exp(0.5 * (std::lgamma(q + 1.0) - std::lgamma(p + 1.0)));
    return f * std::pow(gamma, p - q) * env *
           std::assoc_laguerre(static_cast<unsigned>(q), static_cast<unsigned>(p - q), x);
  }
  const double f = std::exp(0.5 * (std::lgamma(p + 1.0) - std::lgamma(q + 1.0)));
  return f * std::pow(-std::conj(gamma), q - p) * env *
         std::assoc_laguerre(static_cast<unsigned>(p), static_cast<unsigned>(q - p), x);
}

/// Single-mode Wigner operator (1/pi) D(2 alpha) (-1)^N on 0..cutoff.
inline DenseOp wigner_operator(int cutoff, std::complex<double> alpha) {
  if (cutoff < 0 || cutoff > kMaxCutoff)
    throw ValidationError("wigner_operator: cutoff outside [0, 4000]");
  if (4.0 * std::norm(alpha) > cutoff)
    throw ResourceLimit("wigner_operator: |2 alpha|^2 = " + std::to_string(4.0 * std::norm(alpha)) +
                        " exceeds cutoff " + std::to_string(cutoff));
  const int d = cutoff + 1;
  DenseOp W(d, d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      W(p, q) = ((q % 2 == 0) ? 1.0 : -1.0) * displacement_element(p, q, 2.0 * alpha) /
                std::numbers::pi;
  return W;
}

/// W(alpha, beta) = Tr[rho Delta_a(alpha) (x) Delta_b(beta)].
inline double wigner_oracle(const FockMatrix &rho, const PhasePoint &pt) {
  detail::require_finite(pt);
  const int d = rho.mode_dim();
  const DenseOp Da = wigner_operator(rho.cutoff(), pt.alpha);
  const DenseOp Db = wigner_operator(rho.cutoff(), pt.beta);
  const DenseOp &r = rho.matrix();
  std::complex<double> acc = 0.0;
  // sum rho((p', q'), (p, q)) Da(p, p') Db(q, q')
  for (int p = 0; p < d; ++p)
    for (int pp = 0; pp < d; ++pp) {
      const std::complex<double> da = Da(p, pp);
      for (int q = 0; q < d; ++q)
        for (int qq = 0; qq < d; ++qq)
          acc += r(static_cast<Eigen::Index>(pp) * d + qq, static_cast<Eigen::Index>(p) * d + q) *
                 da * Db(q, qq);
    }
  return acc.real();
}

/// Pure-state version, psi(n_a, n_b) as a matrix: sum conj(psi) . (Da psi Db^T),
/// divided by the squared norm.
inline double wigner_oracle(const DenseOp &psi, const PhasePoint &pt) {
  detail::require_finite(pt);
  if (psi.rows() != psi.cols() || psi.rows() < 1)
    throw ValidationError("wigner_oracle: amplitude matrix must be square");
  const int cutoff = static_cast<int>(psi.rows()) - 1;
  const DenseOp Da = wigner_operator(cutoff, pt.alpha);
  const DenseOp Db = wigner_operator(cutoff, pt.beta);
  const DenseOp t = Da * psi * Db.transpose();
  return (psi.conjugate().cwiseProduct(t).sum() / psi.squaredNorm()).real();
}

// ---------------------------------------------------------------------------
// Operator-built state

/// Two-mode squeezed vacuum sech(lambda) sum tanh^k |k, k> on 0..cutoff.
inline Eigen::VectorXcd squeezed_vacuum(double lambda, int cutoff) {
  const int d = cutoff + 1;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  const double t = std::tanh(lambda);
  double c = 1.0 / std::cosh(lambda);
  for (int k = 0; k < d; ++k) {
    v[static_cast<Eigen::Index>(k) * d + k] = c;
    c *= t;
  }
  return v;
}

/// a^m b^n applied to the squeezed vacuum expanded on a basis of m + n extra
/// photons, then restricted to 0..cutoff. Returns psi(n_a, n_b), un-normalized.
inline DenseOp operator_route_amplitudes(const StateSpec &s, int cutoff) {
  s.validate();
  if (cutoff < 1 || cutoff + s.m + s.n > kMaxCutoff)
    throw ValidationError("operator_route_amplitudes: cutoff out of range");
  const int big = cutoff + s.m + s.n;
  const LadderMatrices L(big);
  Eigen::VectorXcd v = squeezed_vacuum(s.lambda, big);
  for (int k = 0; k < s.m; ++k)
    v = L.a() * v;
  for (int k = 0; k < s.n; ++k)
    v = L.b() * v;
  const int D = big + 1;
  DenseOp psi(cutoff + 1, cutoff + 1);
  for (int na = 0; na <= cutoff; ++na)
    for (int nb = 0; nb <= cutoff; ++nb)
      psi(na, nb) = v[static_cast<Eigen::Index>(na) * D + nb];
  return psi;
}

/// psi(n_a, n_b) matrix flattened to the two-mode vector layout.
inline Eigen::VectorXcd flatten(const DenseOp &psi) {
  const Eigen::Index d = psi.rows();
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      v[i * d + j] = psi(i, j);
  return v;
}

inline FockMatrix pure_density(const DenseOp &psi) {
  Eigen::VectorXcd v = flatten(psi);
  v /= v.norm();
  return {static_cast<int>(psi.rows()) - 1, v * v.adjoint()};
}

} // namespace tpssv::oracle
