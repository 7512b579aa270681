#pragma once

// The photon-subtracted two-mode squeezed vacuum a^m b^n S2(lambda)|00>:
// closed-form normalization and overlaps, Fock amplitudes, photon-number
// distribution and dense density matrices.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpssv/errors.hpp"
#include "tpssv/specfun.hpp"

namespace tpssv {

inline constexpr int kMaxSubtracted = 10;
inline constexpr int kMaxCutoff = 4000;
inline constexpr int kMaxDenseCutoff = 40;
inline constexpr double kDefaultTailTolerance = 1e-12;

/// (lambda, m, n): squeezing parameter and photons subtracted from modes a and b.
struct StateSpec {
  double lambda = 0.0;
  int m = 0;
  int n = 0;

  void validate() const {
    if (!std::isfinite(lambda) || !(lambda > 0.0))
      throw ValidationError("StateSpec: lambda must be finite and > 0 (got " +
                            std::to_string(lambda) + ")");
    if (m < 0 || n < 0 || m > kMaxSubtracted || n > kMaxSubtracted)
      throw ValidationError("StateSpec: m and n must lie in [0, 10] (got m=" +
                            std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }

  StateSpec swapped() const { return {lambda, n, m}; }
  friend bool operator==(const StateSpec &, const StateSpec &) = default;
};

namespace detail {

// log |<n_a, n_b | lambda, m, n>| on the support line n_b = n_a + m - n.
inline double log_amplitude(const StateSpec &s, int na) {
  const int nb = na + s.m - s.n;
  const double t = std::tanh(s.lambda);
  return std::lgamma(s.m + na + 1.0) - 0.5 * std::lgamma(na + 1.0) -
         0.5 * std::lgamma(nb + 1.0) - std::log(std::cosh(s.lambda)) +
         (s.m + na) * std::log(t);
}

inline int first_support_index(const StateSpec &s) { return std::max(0, s.n - s.m); }

} // namespace detail

/// N_{lambda,m,n} = m! n! sinh^{2n}(lambda) P_m^{(n-m,0)}(cosh 2 lambda).
inline double normalization(const StateSpec &s) {
  s.validate();
  using specfun::factorial;
  return factorial(s.m) * factorial(s.n) * std::pow(std::sinh(s.lambda), 2 * s.n) *
         specfun::jacobi_p(s.m, s.n - s.m, 0.0, std::cosh(2.0 * s.lambda));
}

/// <lambda, m+s, n+t | lambda, m, n>; zero unless s == t.
inline double overlap(const StateSpec &spec, int s, int t) {
  spec.validate();
  if (s < 0 || t < 0)
    throw ValidationError("overlap: shifts s, t must be >= 0");
  StateSpec{spec.lambda, spec.m + s, spec.n + t}.validate();
  if (s != t)
    return 0.0;
  using specfun::factorial;
  return factorial(spec.m) * factorial(spec.n + s) *
         std::pow(std::sinh(spec.lambda), 2 * spec.n + s) * std::pow(std::cosh(spec.lambda), s) *
         specfun::jacobi_p(spec.m, spec.n - spec.m, s, std::cosh(2.0 * spec.lambda));
}

/// Upper bound on sum_{outside cutoff} |amp|^2 relative to the norm. Along the
/// support line the ratio |amp(k+1)/amp(k)|^2 decreases monotonically towards
/// tanh^2(lambda), so the tail is bounded by a geometric series.
inline double relative_tail_mass(const StateSpec &s, int cutoff) {
  s.validate();
  // first n_a with n_a > cutoff or n_b > cutoff
  const int j0 = cutoff + 1 - std::max(0, s.m - s.n);
  const int k = std::max(j0, detail::first_support_index(s));
  const int nb = k + s.m - s.n;
  const double t2 = std::pow(std::tanh(s.lambda), 2);
  const double ratio = (s.m + k + 1.0) * (s.m + k + 1.0) / ((k + 1.0) * (nb + 1.0)) * t2;
  if (ratio >= 1.0)
    return std::numeric_limits<double>::infinity();
  const double log_head = 2.0 * detail::log_amplitude(s, k) - std::log(normalization(s));
  return std::exp(log_head) / (1.0 - ratio);
}

/// Smallest adequate cutoff: starts at max(20, ceil(m + n + 10/(1 - tanh^2 lambda)))
/// and grows until relative_tail_mass drops below tail_tol.
inline int default_cutoff(const StateSpec &s, double tail_tol = kDefaultTailTolerance) {
  s.validate();
  const double t2 = std::pow(std::tanh(s.lambda), 2);
  int cutoff = std::max(20, static_cast<int>(std::ceil(s.m + s.n + 10.0 / (1.0 - t2))));
  cutoff = std::max(cutoff, std::max(s.m, s.n));
  while (relative_tail_mass(s, cutoff) >= tail_tol) {
    cutoff += std::max(5, cutoff / 10);
    if (cutoff > kMaxCutoff)
      throw ResourceLimit("default_cutoff: required cutoff exceeds " + std::to_string(kMaxCutoff));
  }
  return cutoff;
}

/// Real amplitudes <n_a, n_b | state> on the square lattice 0..cutoff. The
/// un-normalized ket (normalized == false) carries norm^2 = normalization(spec).
class FockAmplitudes {
public:
  FockAmplitudes(StateSpec spec, int cutoff, bool normalized, std::vector<double> amps)
      : spec_(spec), cutoff_(cutoff), normalized_(normalized), amps_(std::move(amps)) {}

  const StateSpec &spec() const { return spec_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return cutoff_ + 1; }
  bool normalized() const { return normalized_; }

  double operator()(int na, int nb) const {
    if (na < 0 || nb < 0 || na > cutoff_ || nb > cutoff_)
      return 0.0;
    return amps_[static_cast<std::size_t>(na * dim() + nb)];
  }
  const std::vector<double> &values() const { return amps_; }

  double norm_squared() const {
    specfun::CompensatedSum<double> acc;
    for (double a : amps_)
      acc += a * a;
    return acc.value();
  }

  /// Copy rescaled by 1/sqrt(normalization(spec)).
  FockAmplitudes normalized_copy() const {
    if (normalized_)
      return *this;
    const double scale = 1.0 / std::sqrt(normalization(spec_));
    std::vector<double> out(amps_);
    for (double &a : out)
      a *= scale;
    return {spec_, cutoff_, true, std::move(out)};
  }

  /// Two-mode vector in the flattened basis index(n_a, n_b) = n_a * dim + n_b.
  Eigen::VectorXcd to_vector() const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amps_.size()));
    for (std::size_t i = 0; i < amps_.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = amps_[i];
    return v;
  }

  /// Same data as a dim x dim matrix psi(n_a, n_b).
  Eigen::MatrixXcd to_matrix() const {
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dim(), dim());
    for (int na = 0; na < dim(); ++na)
      for (int nb = 0; nb < dim(); ++nb)
        psi(na, nb) = (*this)(na, nb);
    return psi;
  }

private:
  StateSpec spec_;
  int cutoff_;
  bool normalized_;
  std::vector<double> amps_;
};

/// <n_a, n_b | lambda, m, n> = (m+n_a)!/sqrt(n_a! n_b!) sech(lambda) tanh^{m+n_a}(lambda),
/// nonzero only when m + n_a == n + n_b. Throws CutoffTooSmall when the
/// truncated tail exceeds tail_tol (pass +inf to skip the check).
inline FockAmplitudes fock_amplitudes(const StateSpec &s, int cutoff,
                                      double tail_tol = kDefaultTailTolerance) {
  s.validate();
  if (cutoff < std::max(s.m, s.n))
    throw CutoffTooSmall("fock_amplitudes: cutoff must be >= max(m, n)", std::max(s.m, s.n));
  if (cutoff > kMaxCutoff)
    throw ResourceLimit("fock_amplitudes: cutoff exceeds " + std::to_string(kMaxCutoff));
  if (std::isfinite(tail_tol)) {
    const double tail = relative_tail_mass(s, cutoff);
    if (!(tail < tail_tol)) {
      std::ostringstream msg;
      msg << "fock_amplitudes: cutoff " << cutoff << " leaves relative tail mass " << tail
          << " >= " << tail_tol;
      int need = cutoff;
      try {
        need = default_cutoff(s, tail_tol);
      } catch (const ResourceLimit &) {
        need = kMaxCutoff;
      }
      throw CutoffTooSmall(msg.str(), need);
    }
  }
  const int d = cutoff + 1;
  std::vector<double> amps(static_cast<std::size_t>(d) * d, 0.0);
  for (int na = detail::first_support_index(s); na <= cutoff; ++na) {
    const int nb = na + s.m - s.n;
    if (nb > cutoff)
      break;
    amps[static_cast<std::size_t>(na * d + nb)] = std::exp(detail::log_amplitude(s, na));
  }
  return {s, cutoff, false, std::move(amps)};
}

/// Photon-number probability P(n_a, n_b) of the normalized state.
inline double pnd(const StateSpec &s, int na, int nb) {
  s.validate();
  if (na < 0 || nb < 0 || s.m + na != s.n + nb)
    return 0.0;
  return std::exp(2.0 * detail::log_amplitude(s, na) - std::log(normalization(s)));
}

struct PndEntry {
  int na;
  int nb;
  double probability;
};

/// Full (cutoff+1)^2 lattice in row-major (n_a outer) order.
inline std::vector<PndEntry> pnd_table(const StateSpec &s, int cutoff) {
  s.validate();
  if (cutoff < 0 || cutoff > kMaxCutoff)
    throw ValidationError("pnd_table: cutoff outside [0, 4000]");
  std::vector<PndEntry> out;
  out.reserve(static_cast<std::size_t>(cutoff + 1) * (cutoff + 1));
  for (int na = 0; na <= cutoff; ++na)
    for (int nb = 0; nb <= cutoff; ++nb)
      out.push_back({na, nb, pnd(s, na, nb)});
  return out;
}

/// Dense two-mode density matrix over the flattened basis n_a * (N+1) + n_b.
/// Immutable once constructed.
class FockMatrix {
public:
  FockMatrix(int cutoff, Eigen::MatrixXcd data) : cutoff_(cutoff), data_(std::move(data)) {
    if (data_.rows() != dim() || data_.cols() != dim())
      throw ValidationError("FockMatrix: matrix shape does not match cutoff");
  }

  int cutoff() const { return cutoff_; }
  int mode_dim() const { return cutoff_ + 1; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(mode_dim()) * mode_dim(); }
  Eigen::Index index(int na, int nb) const {
    return static_cast<Eigen::Index>(na) * mode_dim() + nb;
  }

  const Eigen::MatrixXcd &matrix() const { return data_; }
  std::complex<double> operator()(int na, int nb, int na2, int nb2) const {
    return data_(index(na, nb), index(na2, nb2));
  }

  double trace() const { return data_.trace().real(); }
  double purity() const { return (data_ * data_).trace().real(); }
  double hermiticity_defect() const { return (data_ - data_.adjoint()).cwiseAbs().maxCoeff(); }

private:
  int cutoff_;
  Eigen::MatrixXcd data_;
};

/// |psi><psi| of the normalized state. Dense, so the cutoff is capped at 40.
inline FockMatrix density_matrix(const StateSpec &s, int cutoff,
                                 double tail_tol = kDefaultTailTolerance) {
  if (cutoff > kMaxDenseCutoff)
    throw ResourceLimit("density_matrix: dense cutoff capped at " +
                        std::to_string(kMaxDenseCutoff));
  const Eigen::VectorXcd psi = fock_amplitudes(s, cutoff, tail_tol).normalized_copy().to_vector();
  return {cutoff, psi * psi.adjoint()};
}

} // namespace tpssv
