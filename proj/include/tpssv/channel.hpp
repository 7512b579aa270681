#pragma once

// Decoherence in a thermal channel with equal damping kappa and mean thermal
// photon number nbar on both modes. kappa*t is the only time variable.
//
//  - Kraus operators M_{i,j,r,s} and the operator-sum evolution of a density matrix
//  - the evolved Wigner function in closed form, its m = n = 0 and threshold forms
//  - a Gauss-Hermite convolution of the initial Wigner function (test oracle)

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpssv/errors.hpp"
#include "tpssv/specfun.hpp"
#include "tpssv/state.hpp"
#include "tpssv/wigner.hpp"

namespace tpssv {

/// Thermal channel parameters. T and T1..T3 are derived on every call.
struct ChannelSpec {
  double kappa_t = 0.0;
  double nbar = 0.0;

  void validate() const {
    if (!std::isfinite(kappa_t) || kappa_t < 0.0)
      throw ValidationError("ChannelSpec: kappa_t must be finite and >= 0");
    if (!std::isfinite(nbar) || nbar < 0.0)
      throw ValidationError("ChannelSpec: nbar must be finite and >= 0");
  }

  double T() const { return -std::expm1(-2.0 * kappa_t); }
  double T1() const { return nbar * T() / (nbar * T() + 1.0); }
  double T2() const { return std::exp(-kappa_t) / (nbar * T() + 1.0); }
  double T3() const { return (nbar + 1.0) * T() / (nbar * T() + 1.0); }
};

struct KrausIndex {
  int i = 0; // photons lost from a
  int j = 0; // photons lost from b
  int r = 0; // thermal photons gained by a
  int s = 0; // thermal photons gained by b
};

/// Single-mode Kraus coefficient <p - i + r | K_{i,r} | p>, where the two-mode
/// operator is M_{i,j,r,s} = K_{i,r} (x) K_{j,s} and each factor carries
/// (nbar T + 1)^{-1/2}.
inline double kraus_coefficient(const ChannelSpec &ch, int i, int r, int p) {
  if (i < 0 || r < 0 || p < i)
    return 0.0;
  const double T1 = ch.T1(), T2 = ch.T2(), T3 = ch.T3();
  const int q = p - i;
  // sqrt(T1^r T3^i / (r! i!)) sqrt(p!/q!) T2^q sqrt((q+r)!/q!) / sqrt(nbar T + 1)
  double log_mag = 0.5 * (std::lgamma(p + 1.0) - std::lgamma(q + 1.0)) +
                   0.5 * (std::lgamma(q + r + 1.0) - std::lgamma(q + 1.0)) -
                   0.5 * (std::lgamma(r + 1.0) + std::lgamma(i + 1.0)) -
                   0.5 * std::log1p(ch.nbar * ch.T());
  double mag = std::exp(log_mag);
  mag *= std::sqrt(specfun::ipow(T1, r) * specfun::ipow(T3, i));
  mag *= specfun::ipow(T2, q);
  return mag;
}

/// Dense matrix of M_{i,j,r,s} on the two-mode space truncated at `cutoff`
/// (basis index n_a * (cutoff+1) + n_b). Indices that leave the truncated space
/// simply give the zero matrix.
inline Eigen::MatrixXd kraus_matrix(const KrausIndex &idx, const ChannelSpec &ch, int cutoff) {
  ch.validate();
  if (cutoff < 1)
    throw ValidationError("kraus_matrix: cutoff must be >= 1");
  if (cutoff > kMaxDenseCutoff)
    throw ResourceLimit("kraus_matrix: dense cutoff capped at " + std::to_string(kMaxDenseCutoff));
  if (idx.i < 0 || idx.j < 0 || idx.r < 0 || idx.s < 0)
    throw ValidationError("kraus_matrix: indices must be >= 0");
  const int d = cutoff + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int pa = idx.i; pa <= cutoff; ++pa) {
    const int qa = pa - idx.i + idx.r;
    if (qa > cutoff)
      continue;
    const double ka = kraus_coefficient(ch, idx.i, idx.r, pa);
    for (int pb = idx.j; pb <= cutoff; ++pb) {
      const int qb = pb - idx.j + idx.s;
      if (qb > cutoff)
        continue;
      M(qa * d + qb, pa * d + pb) = ka * kraus_coefficient(ch, idx.j, idx.s, pb);
    }
  }
  return M;
}

/// Per-mode Kraus index ranges kept by the series truncation. Losses are
/// finite (i <= p), so i runs to the cutoff. Thermal gains are infinite; r stops
/// once, for every input p <= cutoff, the marginal weight sum_i k_{i,r}(p)^2 has
/// passed its peak and dropped below series_tol / 16.
struct KrausSeriesBounds {
  int i_max = 0;
  int r_max = 0;
};

inline constexpr int kMaxKrausGain = 20000;

inline KrausSeriesBounds kraus_series_bounds(const ChannelSpec &ch, int cutoff, double series_tol) {
  ch.validate();
  if (!(series_tol > 0.0) || !std::isfinite(series_tol))
    throw ValidationError("kraus_series_bounds: series_tol must be finite and > 0");
  if (cutoff < 1 || cutoff > kMaxCutoff)
    throw ValidationError("kraus_series_bounds: cutoff outside [1, 4000]");
  KrausSeriesBounds b{cutoff, 0};
  if (ch.T1() == 0.0)
    return b;
  // w_{r+1}/w_r -> T1 (p - i + r + 1)/(r + 1) per i, so the largest input has
  // the longest tail; each i-term is unimodal in r.
  const int p = cutoff;
  double prev = INFINITY;
  for (int r = 0;; ++r) {
    if (r > kMaxKrausGain)
      throw ConvergenceError("kraus_series_bounds: thermal gain index exceeds " +
                             std::to_string(kMaxKrausGain));
    double w = 0.0;
    for (int i = 0; i <= p; ++i) {
      const double k = kraus_coefficient(ch, i, r, p);
      w += k * k;
    }
    b.r_max = r;
    if (w < series_tol / 16.0 && w < prev)
      break;
    prev = w;
  }
  return b;
}

struct EvolvedDensity {
  FockMatrix rho;
  double trace = 0.0;
  KrausSeriesBounds bounds;
};

namespace detail {

// weights[(p * d + q) * nd + (shift + r_max)] = sum over (i, r) with i - r = shift of
// k_{i,r}(p + shift) k_{i,r}(q + shift); rho'(p, q) = sum_shift w * rho(p+shift, q+shift).
struct SingleModeSuperop {
  int d = 0;
  int r_max = 0;
  int nd = 0;
  std::vector<double> weights;

  SingleModeSuperop(const ChannelSpec &ch, int cutoff, const KrausSeriesBounds &b)
      : d(cutoff + 1), r_max(b.r_max), nd(b.i_max + b.r_max + 1) {
    weights.assign(static_cast<std::size_t>(d) * d * nd, 0.0);
    // coefficient table k[i][r][input p]
    std::vector<double> k(static_cast<std::size_t>(b.i_max + 1) * (b.r_max + 1) * d, 0.0);
    auto kat = [&](int i, int r, int p) -> double & {
      return k[(static_cast<std::size_t>(i) * (b.r_max + 1) + r) * d + p];
    };
    for (int i = 0; i <= b.i_max; ++i)
      for (int r = 0; r <= b.r_max; ++r)
        for (int p = i; p < d; ++p)
          kat(i, r, p) = kraus_coefficient(ch, i, r, p);

    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        for (int shift = -b.r_max; shift <= b.i_max; ++shift) {
          const int pin = p + shift, qin = q + shift;
          if (pin < 0 || qin < 0 || pin >= d || qin >= d)
            continue;
          double w = 0.0;
          for (int r = std::max(0, -shift); r <= b.r_max; ++r) {
            const int i = r + shift;
            if (i > b.i_max || i > pin || i > qin)
              break;
            w += kat(i, r, pin) * kat(i, r, qin);
          }
          weights[(static_cast<std::size_t>(p) * d + q) * nd + (shift + r_max)] = w;
        }
  }

  double at(int p, int q, int shift) const {
    return weights[(static_cast<std::size_t>(p) * d + q) * nd + (shift + r_max)];
  }
};

} // namespace detail

/// rho(t) = sum M rho0 M^dagger. The channel factorizes into identical single-mode
/// channels, applied one mode at a time.
inline EvolvedDensity evolve_density(const FockMatrix &rho0, const ChannelSpec &ch,
                                     double series_tol = 1e-12) {
  ch.validate();
  const int cutoff = rho0.cutoff();
  const int d = cutoff + 1;
  KrausSeriesBounds b = kraus_series_bounds(ch, cutoff, series_tol);
  b.r_max = std::min(b.r_max, cutoff); // larger gains leave the truncated space
  if (ch.kappa_t == 0.0)
    return {rho0, rho0.trace(), b};

  const detail::SingleModeSuperop S(ch, cutoff, b);
  const Eigen::MatrixXcd &in = rho0.matrix();
  Eigen::MatrixXcd mid = Eigen::MatrixXcd::Zero(in.rows(), in.cols());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(in.rows(), in.cols());
  auto at = [d](int x, int y) { return static_cast<Eigen::Index>(x) * d + y; };

  // mode a: rho'((p,b),(q,b')) = sum_shift w(p,q,shift) rho((p+shift,b),(q+shift,b'))
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      for (int shift = -b.r_max; shift <= b.i_max; ++shift) {
        const double w = (p + shift < 0 || q + shift < 0 || p + shift >= d || q + shift >= d)
                             ? 0.0
                             : S.at(p, q, shift);
        if (w == 0.0)
          continue;
        for (int nb = 0; nb < d; ++nb)
          for (int nb2 = 0; nb2 < d; ++nb2)
            mid(at(p, nb), at(q, nb2)) += w * in(at(p + shift, nb), at(q + shift, nb2));
      }
  // mode b
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      for (int shift = -b.r_max; shift <= b.i_max; ++shift) {
        const double w = (p + shift < 0 || q + shift < 0 || p + shift >= d || q + shift >= d)
                             ? 0.0
                             : S.at(p, q, shift);
        if (w == 0.0)
          continue;
        for (int na = 0; na < d; ++na)
          for (int na2 = 0; na2 < d; ++na2)
            out(at(na, p), at(na2, q)) += w * mid(at(na, p + shift), at(na2, q + shift));
      }
  FockMatrix rho(cutoff, std::move(out));
  const double tr = rho.trace();
  return {std::move(rho), tr, b};
}

/// Diagonal of sum_{i,r} K_{i,r}^dagger K_{i,r} for one mode on inputs 0..cutoff,
/// with (i, r) limited by kraus_series_bounds. Outputs are not clipped, i.e. this
/// is the interior block of the operator sum on a space large enough to hold
/// every raised state. K^dagger K is diagonal, and the two-mode sum over
/// M_{i,j,r,s} is the outer product of this vector with itself.
inline std::vector<double> kraus_completeness_diagonal(const ChannelSpec &ch, int cutoff,
                                                       double series_tol = 1e-12) {
  ch.validate();
  if (cutoff < 1 || cutoff > kMaxCutoff)
    throw ValidationError("kraus_completeness_diagonal: cutoff outside [1, 4000]");
  const KrausSeriesBounds b = kraus_series_bounds(ch, cutoff, series_tol);
  std::vector<double> diag(static_cast<std::size_t>(cutoff) + 1, 0.0);
  for (int p = 0; p <= cutoff; ++p) {
    specfun::CompensatedSum<double> acc;
    for (int i = 0; i <= std::min(p, b.i_max); ++i)
      for (int r = 0; r <= b.r_max; ++r) {
        const double k = kraus_coefficient(ch, i, r, p);
        acc += k * k;
      }
    diag[static_cast<std::size_t>(p)] = acc.value();
  }
  return diag;
}

/// max |(sum M^dagger M)(p_a, p_b) - 1| over the two-mode interior block.
inline double kraus_completeness_defect(const ChannelSpec &ch, int cutoff,
                                        double series_tol = 1e-12) {
  const std::vector<double> d = kraus_completeness_diagonal(ch, cutoff, series_tol);
  double worst = 0.0;
  for (double x : d)
    for (double y : d)
      worst = std::max(worst, std::abs(x * y - 1.0));
  return worst;
}

// ---------------------------------------------------------------------------
// Evolved Wigner function

/// Coefficients of the evolved closed form at one phase point (kappa_t > 0).
struct EvolvedWfCoeffs {
  double C = 0, D = 0, E = 0, F = 0;
  cdouble G, K, A_bar, B_bar;

  static EvolvedWfCoeffs of(const StateSpec &s, const ChannelSpec &ch, const PhasePoint &pt) {
    if (!(ch.kappa_t > 0.0))
      throw ValidationError("EvolvedWfCoeffs: requires kappa_t > 0");
    const double lam = s.lambda, kt = ch.kappa_t;
    const double T = ch.T(), width = (2.0 * ch.nbar + 1.0) * T;
    const double th = std::tanh(lam), ch_ = std::cosh(lam), sh_ = std::sinh(lam);
    EvolvedWfCoeffs c;
    c.C = std::exp(-2.0 * kt) / width;
    c.D = (1.0 + c.C * std::exp(-2.0 * lam)) * (1.0 + c.C * std::exp(2.0 * lam));
    c.E = std::exp(4.0 * kt) / c.D * std::pow(2.0 * ch.nbar * T + 1.0, 2) * c.C * c.C;
    c.F = (c.C * c.C - 1.0) / c.D;
    const cdouble i2(0.0, 2.0 * std::sqrt(th));
    c.B_bar = i2 * (std::conj(pt.beta) * ch_ + pt.alpha * sh_);
    c.A_bar = i2 * (std::conj(pt.alpha) * ch_ + pt.beta * sh_);
    const WfAux aux = WfAux::of(lam, SqueezedFrame::of(lam, pt));
    const double g = c.C * std::exp(kt) / c.D;
    c.G = g * (c.B_bar + std::conj(aux.B) * c.C);
    c.K = g * (c.A_bar + std::conj(aux.A) * c.C);
    return c;
  }
};

/// Closed-form W(alpha, beta, t). At kappa_t == 0 this is wf_point.
inline double wf_evolved_point(const StateSpec &s, const ChannelSpec &ch, const PhasePoint &pt) {
  s.validate();
  ch.validate();
  detail::require_finite(pt);
  if (ch.kappa_t == 0.0)
    return wf_point(s, pt);

  const EvolvedWfCoeffs c = EvolvedWfCoeffs::of(s, ch, pt);
  const double lam = s.lambda, kt = ch.kappa_t, T = ch.T();
  const double width = (2.0 * ch.nbar + 1.0) * T;
  const double th = std::tanh(lam);
  const double rootE = std::sqrt(c.E);
  const cdouble x = c.G / rootE, y = c.K / rootE;

  specfun::CompensatedSum<cdouble> acc;
  for (int l = 0; l <= s.n; ++l)
    for (int k = 0; k <= s.m; ++k) {
      const cdouble h = specfun::hermite2(s.m - k, s.n - l, x, y);
      const cdouble hc = specfun::hermite2(s.m - k, s.n - l, std::conj(x), std::conj(y));
      acc += detail::hermite_weight(s.n, s.m, l, k, -c.F / c.E * th) * h * hc;
    }
  const cdouble sum = acc.value();
  if (std::abs(sum.imag()) > kImagResidueTolerance * std::max(1.0, std::abs(sum.real())))
    throw ConvergenceError("wf_evolved_point: imaginary residue above 1e-10");

  const cdouble u = pt.alpha - std::conj(pt.beta), v = pt.alpha + std::conj(pt.beta);
  const double exponent = -std::norm(u) / (std::exp(-2.0 * lam - 2.0 * kt) + width) -
                          std::norm(v) / (std::exp(2.0 * lam - 2.0 * kt) + width);
  const double pref = std::pow(0.5 * c.E * std::sinh(2.0 * lam), s.m + s.n) / normalization(s) /
                      (std::numbers::pi * std::numbers::pi * width * width * c.D);
  return pref * std::exp(exponent) * sum.real();
}

/// m = n = 0 evolved Wigner function,
///   W = exp(-(E/D)(|alpha|^2+|beta|^2) + (F/D)(alpha beta + c.c.)) / (pi^2 D)
/// with D = ((2nbar+1)T)^2 (1 + C e^{-2lambda})(1 + C e^{2lambda}),
/// E = 2(2nbar+1)T + 2 e^{-2kt} cosh(2lambda), F = 2 e^{-2kt} sinh(2lambda).
inline double wf_evolved_vacuum_case(const ChannelSpec &ch, double lambda, const PhasePoint &pt) {
  ch.validate();
  StateSpec{lambda, 0, 0}.validate();
  detail::require_finite(pt);
  const double decay = std::exp(-2.0 * ch.kappa_t);
  const double width = (2.0 * ch.nbar + 1.0) * ch.T();
  // (width + decay e^{-2lambda})(width + decay e^{2lambda}) avoids 1/T at kappa_t = 0
  const double D = (width + decay * std::exp(-2.0 * lambda)) * (width + decay * std::exp(2.0 * lambda));
  const double E = 2.0 * width + 2.0 * decay * std::cosh(2.0 * lambda);
  const double F = 2.0 * decay * std::sinh(2.0 * lambda);
  const double r2 = std::norm(pt.alpha) + std::norm(pt.beta);
  const double cross = 2.0 * (pt.alpha * pt.beta).real();
  return std::exp(-E / D * r2 + F / D * cross) / (std::numbers::pi * std::numbers::pi * D);
}

/// Product of two thermal states, the kappa_t -> infinity limit.
inline double wf_thermal_limit(double nbar, const PhasePoint &pt) {
  const double w = 2.0 * nbar + 1.0;
  return std::exp(-2.0 / w * (std::norm(pt.alpha) + std::norm(pt.beta))) /
         (std::numbers::pi * std::numbers::pi * w * w);
}

/// Decay time past which the evolved Wigner function is nonnegative everywhere:
/// kt_c = ln((2nbar + 2) / (2nbar + 1)) / 2.
inline double threshold_time(double nbar) {
  if (!std::isfinite(nbar) || nbar < 0.0)
    throw ValidationError("threshold_time: nbar must be finite and >= 0");
  return 0.5 * std::log((2.0 * nbar + 2.0) / (2.0 * nbar + 1.0));
}

/// Evolved Wigner function at kt_c, where it collapses to a single
/// Hermite-Gaussian |H_{m,n}|^2 term.
inline double wf_at_threshold(const StateSpec &s, double nbar, const PhasePoint &pt) {
  s.validate();
  detail::require_finite(pt);
  const double ktc = threshold_time(nbar);
  const double th = std::tanh(s.lambda);
  const double growth = std::exp(ktc);
  const cdouble k(0.0, std::sqrt(th) * growth);
  const cdouble h = specfun::hermite2(s.m, s.n, k * std::conj(pt.beta), k * std::conj(pt.alpha));
  const double quad = std::norm(pt.alpha) + std::norm(pt.beta) - 2.0 * (pt.alpha * pt.beta).real() * th;
  const double pref = specfun::ipow(th, s.m + s.n) / std::pow(std::cosh(s.lambda), 2) /
                      (4.0 * std::numbers::pi * std::numbers::pi * normalization(s) *
                       std::exp(-4.0 * ktc));
  return pref * std::exp(-growth * growth * quad) * std::norm(h);
}

// ---------------------------------------------------------------------------
// Convolution oracle

/// Gauss-Hermite nodes and weights for weight exp(-x^2) (Golub-Welsch).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussHermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 200)
    throw ValidationError("gauss_hermite: order outside [1, 200]");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k)
    J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermiteRule rule;
  for (int k = 0; k < order; ++k) {
    rule.nodes.push_back(es.eigenvalues()[k]);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights.push_back(std::sqrt(std::numbers::pi) * v0 * v0);
  }
  return rule;
}

inline constexpr int kMaxQuadratureResolution = 64;

namespace detail {
inline double convolve_gauss_hermite(const StateSpec &s, const ChannelSpec &ch,
                                     const PhasePoint &pt, int order) {
  const GaussHermiteRule gh = gauss_hermite(order);
  const double scale = std::sqrt((2.0 * ch.nbar + 1.0) / 2.0);
  const double rootT = std::sqrt(ch.T());
  const double growth = std::exp(ch.kappa_t);
  std::vector<cdouble> z;
  std::vector<double> w;
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      z.emplace_back(scale * gh.nodes[a], scale * gh.nodes[b]);
      w.push_back(gh.weights[a] * gh.weights[b]);
    }
  specfun::CompensatedSum<double> acc;
  for (std::size_t a = 0; a < z.size(); ++a) {
    const cdouble alpha = growth * (pt.alpha - rootT * z[a]);
    for (std::size_t b = 0; b < z.size(); ++b) {
      const cdouble beta = growth * (pt.beta - rootT * z[b]);
      acc += w[a] * w[b] * wf_point(s, {alpha, beta});
    }
  }
  // 4 e^{4kt} * (1/(2 pi))^2 from the two thermal Wigner weights
  return std::exp(4.0 * ch.kappa_t) * acc.value() / (std::numbers::pi * std::numbers::pi);
}
} // namespace detail

/// Evolved Wigner function from the thermal-kernel convolution of the initial
/// one, W(t) = 4 e^{4kt} \int W_th W_th W(e^{kt}(alpha - sqrt(T) zeta), ...),
/// by tensor-product Gauss-Hermite quadrature with `resolution` nodes per real
/// axis. Throws ConvergenceError if a 3/4-resolution rerun differs by more than
/// `convergence_tol`.
inline double wf_convolution_oracle(const StateSpec &s, const ChannelSpec &ch, const PhasePoint &pt,
                                    int resolution = 24, double convergence_tol = 1e-6) {
  s.validate();
  ch.validate();
  detail::require_finite(pt);
  if (resolution < 4 || resolution > kMaxQuadratureResolution)
    throw ValidationError("wf_convolution_oracle: resolution outside [4, 64]");
  if (ch.kappa_t == 0.0)
    return wf_point(s, pt);
  const double fine = detail::convolve_gauss_hermite(s, ch, pt, resolution);
  const double coarse = detail::convolve_gauss_hermite(s, ch, pt, (3 * resolution + 3) / 4);
  if (std::abs(fine - coarse) > convergence_tol)
    throw ConvergenceError("wf_convolution_oracle: quadrature not converged (|diff| = " +
                           std::to_string(std::abs(fine - coarse)) + ")");
  return fine;
}

/// Grid of the evolved Wigner function.
inline WignerGrid wf_evolved_grid(const StateSpec &s, const ChannelSpec &ch, const GridRequest &req,
                                  unsigned threads = 0) {
  s.validate();
  ch.validate();
  return evaluate_grid(req, [&](const PhasePoint &pt) { return wf_evolved_point(s, ch, pt); },
                       threads);
}

} // namespace tpssv
