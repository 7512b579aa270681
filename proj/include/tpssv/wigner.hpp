#pragma once

// Closed-form two-mode Wigner function of the state, phase-space grids and
// negativity summaries.
//
// Normalization: W integrates to 1 over (q1, p1, q2, p2) with
// alpha = (q1 + i p1)/sqrt2, beta = (q2 + i p2)/sqrt2; the two-mode vacuum
// peaks at 1/pi^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "tpssv/errors.hpp"
#include "tpssv/specfun.hpp"
#include "tpssv/state.hpp"

namespace tpssv {

using cdouble = std::complex<double>;

inline constexpr double kImagResidueTolerance = 1e-10;
inline constexpr double kNegativeThreshold = -1e-12;
inline constexpr std::size_t kMaxGridPoints = 1'000'000;

struct PhasePoint {
  cdouble alpha;
  cdouble beta;

  static PhasePoint from_quadratures(double q1, double p1, double q2, double p2) {
    const double s = std::numbers::sqrt2;
    return {cdouble(q1, p1) / s, cdouble(q2, p2) / s};
  }
  static PhasePoint from_quadratures(const std::array<double, 4> &x) {
    return from_quadratures(x[0], x[1], x[2], x[3]);
  }
  std::array<double, 4> quadratures() const {
    const double s = std::numbers::sqrt2;
    return {alpha.real() * s, alpha.imag() * s, beta.real() * s, beta.imag() * s};
  }
  bool finite() const {
    return std::isfinite(alpha.real()) && std::isfinite(alpha.imag()) &&
           std::isfinite(beta.real()) && std::isfinite(beta.imag());
  }
};

/// alpha_bar = alpha cosh - beta* sinh, beta_bar = beta cosh - alpha* sinh.
struct SqueezedFrame {
  cdouble alpha_bar;
  cdouble beta_bar;

  static SqueezedFrame of(double lambda, const PhasePoint &pt) {
    const double c = std::cosh(lambda), s = std::sinh(lambda);
    return {pt.alpha * c - std::conj(pt.beta) * s, pt.beta * c - std::conj(pt.alpha) * s};
  }
};

/// A = -2i alpha_bar sqrt(tanh), B = -2i beta_bar sqrt(tanh).
struct WfAux {
  cdouble A;
  cdouble B;

  static WfAux of(double lambda, const SqueezedFrame &f) {
    const cdouble k(0.0, -2.0 * std::sqrt(std::tanh(lambda)));
    return {k * f.alpha_bar, k * f.beta_bar};
  }
};

namespace detail {
inline void require_finite(const PhasePoint &pt) {
  if (!pt.finite())
    throw ValidationError("PhasePoint: components must be finite");
}

// [m! n!]^2 x^(l+k) / (l! k! [(m-l)! (n-k)!]^2)
inline double hermite_weight(int m, int n, int l, int k, double x) {
  using specfun::factorial;
  const double mn = factorial(m) * factorial(n);
  const double den = factorial(m - l) * factorial(n - k);
  return mn * mn * specfun::ipow(x, l + k) / (factorial(l) * factorial(k) * den * den);
}
} // namespace detail

/// The (l, k) double sum before the real part is taken. Each term is
/// H(B, A) H(B*, A*), which is real only up to rounding.
inline cdouble wf_point_complex(const StateSpec &s, const PhasePoint &pt) {
  s.validate();
  detail::require_finite(pt);
  const SqueezedFrame f = SqueezedFrame::of(s.lambda, pt);
  const WfAux aux = WfAux::of(s.lambda, f);
  const double th = std::tanh(s.lambda);

  specfun::CompensatedSum<cdouble> acc;
  for (int l = 0; l <= s.m; ++l)
    for (int k = 0; k <= s.n; ++k) {
      const cdouble h = specfun::hermite2(s.m - l, s.n - k, aux.B, aux.A);
      const cdouble hc = specfun::hermite2(s.m - l, s.n - k, std::conj(aux.B), std::conj(aux.A));
      acc += detail::hermite_weight(s.m, s.n, l, k, -th) * h * hc;
    }
  const double pref = std::pow(0.5 * std::sinh(2.0 * s.lambda), s.m + s.n) / normalization(s) *
                      std::exp(-2.0 * std::norm(f.alpha_bar) - 2.0 * std::norm(f.beta_bar)) /
                      (std::numbers::pi * std::numbers::pi);
  return pref * acc.value();
}

/// Closed-form Wigner function W(alpha, beta).
inline double wf_point(const StateSpec &s, const PhasePoint &pt) {
  const cdouble w = wf_point_complex(s, pt);
  if (std::abs(w.imag()) > kImagResidueTolerance * std::max(1.0, std::abs(w.real())))
    throw ConvergenceError("wf_point: imaginary residue above 1e-10");
  return w.real();
}

/// m = 0 special case: ((-1)^n / pi^2) exp(-2|alpha_bar|^2 - 2|beta_bar|^2) L_n(4|alpha_bar|^2).
inline double wf_special_subtract_b_only(const StateSpec &s, const PhasePoint &pt) {
  s.validate();
  detail::require_finite(pt);
  if (s.m != 0)
    throw ValidationError("wf_special_subtract_b_only: requires m == 0");
  const SqueezedFrame f = SqueezedFrame::of(s.lambda, pt);
  const double a2 = std::norm(f.alpha_bar);
  const double sign = (s.n % 2 == 0) ? 1.0 : -1.0;
  return sign / (std::numbers::pi * std::numbers::pi) *
         std::exp(-2.0 * a2 - 2.0 * std::norm(f.beta_bar)) * specfun::laguerre(s.n, 4.0 * a2);
}

// ---------------------------------------------------------------------------
// Grids

enum class Axis { q1 = 0, p1 = 1, q2 = 2, p2 = 3 };

inline const char *axis_name(Axis a) {
  static constexpr const char *names[] = {"q1", "p1", "q2", "p2"};
  return names[static_cast<int>(a)];
}

inline Axis parse_axis(const std::string &name) {
  for (Axis a : {Axis::q1, Axis::p1, Axis::q2, Axis::p2})
    if (name == axis_name(a))
      return a;
  throw ValidationError("unknown phase-space axis '" + name + "'");
}

/// A rectangular 2D slice of the 4D phase space. Axes not varied sit at `fixed`.
struct GridRequest {
  Axis x_axis = Axis::p1;
  Axis y_axis = Axis::p2;
  std::array<double, 4> fixed{0.0, 0.0, 0.0, 0.0};
  double x_min = -3.0, x_max = 3.0;
  double y_min = -3.0, y_max = 3.0;
  int nx = 61;
  int ny = 61;

  /// (0, 0, p1, p2): q1 = q2 = 0.
  static GridRequest momentum_slice(double half_width = 3.0, int points = 61) {
    return {Axis::p1, Axis::p2, {}, -half_width, half_width, -half_width, half_width, points, points};
  }
  /// (q1, q2, 0, 0): p1 = p2 = 0.
  static GridRequest position_slice(double half_width = 3.0, int points = 61) {
    return {Axis::q1, Axis::q2, {}, -half_width, half_width, -half_width, half_width, points, points};
  }

  std::string slice_name() const {
    return std::string(axis_name(x_axis)) + axis_name(y_axis);
  }

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

  void validate() const {
    if (x_axis == y_axis)
      throw ValidationError("GridRequest: x and y axes must differ");
    if (nx < 1 || ny < 1)
      throw ValidationError("GridRequest: point counts must be >= 1");
    for (double v : {x_min, x_max, y_min, y_max, fixed[0], fixed[1], fixed[2], fixed[3]})
      if (!std::isfinite(v))
        throw ValidationError("GridRequest: non-finite range or fixed value");
    if (x_min > x_max || y_min > y_max)
      throw ValidationError("GridRequest: empty range");
    if (static_cast<double>(nx) * static_cast<double>(ny) > static_cast<double>(kMaxGridPoints))
      throw ResourceLimit("GridRequest: more than 1e6 points requested");
  }

  double x_at(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
  double y_at(int j) const { return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1); }

  PhasePoint point(int i, int j) const {
    std::array<double, 4> x = fixed;
    x[static_cast<int>(x_axis)] = x_at(i);
    x[static_cast<int>(y_axis)] = y_at(j);
    return PhasePoint::from_quadratures(x);
  }
};

/// Filled grid; values are stored row-major with y outer, x inner.
struct WignerGrid {
  GridRequest request;
  std::vector<double> values;
  double min_value = 0.0;
  PhasePoint min_location{};
  double negative_fraction = 0.0; // fraction of samples below -1e-12

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * request.nx + static_cast<std::size_t>(i)];
  }
};

/// Evaluates `wf(PhasePoint)` on every grid node. Points are split across
/// threads; each output slot is written exactly once, so results do not
/// depend on the thread count.
template <class WignerFn>
WignerGrid evaluate_grid(const GridRequest &req, WignerFn &&wf, unsigned threads = 0) {
  req.validate();
  WignerGrid g;
  g.request = req;
  g.values.assign(req.size(), 0.0);

  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, req.size()));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx % req.nx);
      const int j = static_cast<int>(idx / req.nx);
      g.values[idx] = wf(req.point(i, j));
    }
  };
  if (threads <= 1) {
    work(0, req.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (req.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(req.size(), b + chunk);
      if (b < e)
        pool.emplace_back(work, b, e);
    }
  }

  std::size_t argmin = 0, negatives = 0;
  for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
    if (g.values[idx] < g.values[argmin])
      argmin = idx;
    if (g.values[idx] < kNegativeThreshold)
      ++negatives;
  }
  g.min_value = g.values[argmin];
  g.min_location = req.point(static_cast<int>(argmin % req.nx), static_cast<int>(argmin / req.nx));
  g.negative_fraction = static_cast<double>(negatives) / static_cast<double>(g.values.size());
  return g;
}

inline WignerGrid wf_grid(const StateSpec &s, const GridRequest &req, unsigned threads = 0) {
  s.validate();
  return evaluate_grid(req, [&](const PhasePoint &pt) { return wf_point(s, pt); }, threads);
}

// ---------------------------------------------------------------------------
// Profile heuristics (valley / peak counting along a slice diagonal)

/// Values along the main diagonal of a square slice, x == y, from min to max.
template <class WignerFn>
std::vector<double> diagonal_profile(const GridRequest &req, WignerFn &&wf, int points) {
  req.validate();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int t = 0; t < points; ++t) {
    const double u = points == 1 ? 0.0 : static_cast<double>(t) / (points - 1);
    std::array<double, 4> x = req.fixed;
    x[static_cast<int>(req.x_axis)] = req.x_min + (req.x_max - req.x_min) * u;
    x[static_cast<int>(req.y_axis)] = req.y_min + (req.y_max - req.y_min) * u;
    out.push_back(wf(PhasePoint::from_quadratures(x)));
  }
  return out;
}

/// Interior samples strictly below both neighbours.
inline int count_strict_local_minima(const std::vector<double> &v) {
  int c = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] < v[i - 1] && v[i] < v[i + 1])
      ++c;
  return c;
}

inline int count_strict_local_maxima(const std::vector<double> &v) {
  int c = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > v[i + 1])
      ++c;
  return c;
}

} // namespace tpssv
