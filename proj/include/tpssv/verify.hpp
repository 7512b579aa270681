#pragma once

// Acceptance suite: each check recomputes one family of closed-form results
// against its brute-force counterpart and reports the worst deviation seen.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tpssv/channel.hpp"
#include "tpssv/moments.hpp"
#include "tpssv/oracle.hpp"
#include "tpssv/specfun.hpp"
#include "tpssv/state.hpp"
#include "tpssv/wigner.hpp"

namespace tpssv::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool warning_only = false;
  double tolerance = 0.0;
  double observed = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  bool quick = false;                 // (m, n) <= 2 subsets
  bool perturb_normalization = false; // fault injection: scales N by (1 + 1e-6)
  std::uint64_t seed = 20240611;
};

namespace detail {

inline double rel_dev(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// |got - want| / max(1, |want|)
inline double scaled_dev(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

inline std::vector<PhasePoint> random_points(std::mt19937_64 &rng, int count, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < count; ++i) {
    const double q1 = u(rng), p1 = u(rng), q2 = u(rng), p2 = u(rng);
    pts.push_back(PhasePoint::from_quadratures(q1, p1, q2, p2));
  }
  return pts;
}

template <class Fn> CheckResult timed(int id, std::string name, Fn &&body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r = body();
  r.id = id;
  r.name = std::move(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline int max_mn(const Options &o, int full) { return o.quick ? std::min(2, full) : full; }

} // namespace detail

// 1 ---------------------------------------------------------------------------
inline CheckResult check_normalization(const Options &o) {
  const std::function<double(const StateSpec &)> norm = [&](const StateSpec &s) {
    return normalization(s) * (o.perturb_normalization ? 1.0 + 1e-6 : 1.0);
  };
  double worst = 0.0, worst80 = 0.0;
  int worst_cutoff = 0;
  for (double lam : {0.3, 0.8, 1.5})
    for (int m = 0; m <= detail::max_mn(o, 5); ++m)
      for (int n = 0; n <= detail::max_mn(o, 5); ++n) {
        const StateSpec s{lam, m, n};
        const int cutoff = std::max(80, default_cutoff(s));
        const double fock = fock_amplitudes(s, cutoff, INFINITY).norm_squared();
        const double fock80 = fock_amplitudes(s, 80, INFINITY).norm_squared();
        const double d = detail::rel_dev(norm(s), fock);
        if (d > worst) {
          worst = d;
          worst_cutoff = cutoff;
        }
        worst80 = std::max(worst80, detail::rel_dev(norm(s), fock80));
      }
  CheckResult r;
  r.tolerance = 1e-9;
  r.observed = worst;
  r.passed = worst < r.tolerance;
  r.detail = "adaptive cutoff (worst at " + std::to_string(worst_cutoff) +
             "); at fixed cutoff 80 the truncated sum deviates by " + detail::sci(worst80);
  return r;
}

// 2 ---------------------------------------------------------------------------
inline CheckResult check_moments(const Options &o) {
  double worst = 0.0;
  std::string where;
  for (double lam : {0.3, 0.8, 1.5})
    for (int m = 0; m <= detail::max_mn(o, 4); ++m)
      for (int n = 0; n <= detail::max_mn(o, 4); ++n) {
        const StateSpec s{lam, m, n};
        const int cutoff = default_cutoff(s) + 4;
        const Eigen::VectorXcd psi =
            oracle::flatten(oracle::operator_route_amplitudes(s, cutoff)).normalized();
        const oracle::LadderMatrices L(cutoff);
        const Eigen::VectorXcd a = L.a() * psi, b = L.b() * psi;
        const Eigen::VectorXcd ab = L.a() * b;
        const Eigen::VectorXcd a2 = L.a() * a, b2 = L.b() * b;
        const MomentSet mom = moments(s);
        const double want[] = {a.squaredNorm(),
                               b.squaredNorm(),
                               ab.squaredNorm(),
                               psi.dot(ab).real(),
                               a2.squaredNorm(),
                               b2.squaredNorm()};
        const double got[] = {mom.mean_na,    mom.mean_nb,           mom.cross_nanb,
                              mom.mean_ab,    factorial_moment_a2(s), factorial_moment_b2(s)};
        static const char *names[] = {"<a+a>", "<b+b>", "<a+b+ab>", "<ab>", "<a+2a2>", "<b+2b2>"};
        for (int k = 0; k < 6; ++k) {
          const double d = detail::rel_dev(got[k], want[k]);
          if (d > worst) {
            worst = d;
            std::ostringstream os;
            os << names[k] << " at (" << lam << "," << m << "," << n << ")";
            where = os.str();
          }
        }
      }
  CheckResult r;
  r.tolerance = 1e-8;
  r.observed = worst;
  r.passed = worst < r.tolerance;
  r.detail = "worst " + where;
  return r;
}

// 3 ---------------------------------------------------------------------------
inline CheckResult check_closed_specials(const Options &) {
  double worst = 0.0;
  bool bracket_ok = true;
  std::ostringstream notes;
  for (double lam : {0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0}) {
    const QuadratureReport q00 = quadrature_variances({lam, 0, 0});
    worst = std::max(worst, detail::scaled_dev(q00.var_Q, std::exp(2 * lam) / 2));
    worst = std::max(worst, detail::scaled_dev(q00.var_P, std::exp(-2 * lam) / 2));
    worst = std::max(worst, detail::scaled_dev(q00.uncertainty_product, 0.25));
    const QuadratureReport q01 = quadrature_variances({lam, 0, 1});
    worst = std::max(worst, detail::scaled_dev(q01.var_P, std::exp(-2 * lam)));
    worst = std::max(worst, detail::scaled_dev(antibunching({lam, 0, 0}), -1.0 / std::cosh(2 * lam)));
    const double c2 = std::cosh(2 * lam);
    const double r02 = (5 - 3 * c2) / (6 * (1 + 2 * c2)) / std::pow(std::sinh(lam), 2);
    worst = std::max(worst, detail::scaled_dev(antibunching({lam, 0, 2}), r02));
  }
  // squeezing onset of (0, 1) at lambda = ln2 / 2
  const double onset = 0.5 * std::numbers::ln2;
  if (quadrature_variances({onset - 1e-6, 0, 1}).p_squeezed ||
      !quadrature_variances({onset + 1e-6, 0, 1}).p_squeezed)
    bracket_ok = false;
  // R_ab sign change of (0, 2) in [0.5, 0.6]
  const double lo = antibunching({0.5, 0, 2}), hi = antibunching({0.6, 0, 2});
  if (!(lo * hi < 0.0))
    bracket_ok = false;
  double a = 0.5, b = 0.6;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (a + b);
    (antibunching({mid, 0, 2}) * lo > 0.0 ? a : b) = mid;
  }
  notes << "R_ab(0,2) root " << 0.5 * (a + b) << ", squeezing onset " << onset;
  CheckResult r;
  r.tolerance = 1e-12;
  r.observed = worst;
  r.passed = worst < r.tolerance && bracket_ok;
  r.detail = notes.str() + (bracket_ok ? "" : " (bracketing failed)");
  return r;
}

// 4 ---------------------------------------------------------------------------
inline CheckResult check_wigner_oracle(const Options &o) {
  std::mt19937_64 rng(o.seed);
  double worst = 0.0;
  for (double lam : {0.3, 0.8})
    for (int m = 0; m <= detail::max_mn(o, 3); ++m)
      for (int n = 0; n <= detail::max_mn(o, 3); ++n) {
        const StateSpec s{lam, m, n};
        const oracle::DenseOp psi = oracle::operator_route_amplitudes(s, 60);
        for (const PhasePoint &pt : detail::random_points(rng, 25, 1.5))
          worst = std::max(worst, std::abs(wf_point(s, pt) - oracle::wigner_oracle(psi, pt)));
      }
  CheckResult r;
  r.tolerance = 1e-8;
  r.observed = worst;
  r.passed = worst < r.tolerance;
  r.detail = "25 points per (m, n, lambda), cutoff 60, |q|,|p| <= 1.5";
  return r;
}

// 5 ---------------------------------------------------------------------------
inline CheckResult check_subtract_b_only(const Options &o) {
  std::mt19937_64 rng(o.seed + 5);
  double worst = 0.0;
  for (double lam : {0.3, 0.8, 1.5})
    for (int n = 0; n <= 5; ++n) {
      const StateSpec s{lam, 0, n};
      for (const PhasePoint &pt : detail::random_points(rng, 25, 2.0))
        worst = std::max(worst, std::abs(wf_point(s, pt) - wf_special_subtract_b_only(s, pt)));
    }
  double origin = 0.0;
  for (double lam : {0.05, 0.3, 0.8, 1.5, 2.0})
    origin = std::max(origin, std::abs(wf_point({lam, 0, 1}, {}) + 1.0 / (std::numbers::pi * std::numbers::pi)));
  CheckResult r;
  r.tolerance = 1e-12;
  r.observed = std::max(worst, origin);
  r.passed = r.observed < r.tolerance;
  r.detail = "closed forms agree to " + detail::sci(worst) + ", origin of (0,1) off -1/pi^2 by " +
             detail::sci(origin);
  return r;
}

// 6 ---------------------------------------------------------------------------
inline CheckResult check_channel_triangle(const Options &o) {
  std::mt19937_64 rng(o.seed + 6);
  const StateSpec s{0.3, 0, 1};
  const ChannelSpec ch{0.1, 1.0};
  const EvolvedDensity ev = evolve_density(density_matrix(s, 30), ch);
  double ab = 0.0, ac = 0.0;
  for (const PhasePoint &pt : detail::random_points(rng, 10, 1.5)) {
    const double a = wf_evolved_point(s, ch, pt);
    ab = std::max(ab, std::abs(a - oracle::wigner_oracle(ev.rho, pt)));
    ac = std::max(ac, std::abs(a - wf_convolution_oracle(s, ch, pt, 24)));
  }
  CheckResult r;
  r.tolerance = 1e-6;
  r.observed = ab;
  r.passed = ab < 1e-6 && ac < 1e-4;
  r.detail = "closed form vs Kraus+parity " + detail::sci(ab) + " (tol 1e-6), vs quadrature " +
             detail::sci(ac) + " (tol 1e-4)";
  return r;
}

// 7 ---------------------------------------------------------------------------
inline CheckResult check_limits(const Options &o) {
  std::mt19937_64 rng(o.seed + 7);
  double at0 = 0.0, at8 = 0.0, vac = 0.0;
  for (double lam : {0.3, 0.8})
    for (int m = 0; m <= detail::max_mn(o, 3); ++m)
      for (int n = 0; n <= detail::max_mn(o, 3); ++n)
        for (const PhasePoint &pt : detail::random_points(rng, 5, 2.0))
          at0 = std::max(at0, std::abs(wf_evolved_point({lam, m, n}, {0.0, 1.0}, pt) -
                                       wf_point({lam, m, n}, pt)));
  // Same channel as the triangle check. At nbar = 0 the e^{-2kt} remainder of the
  // exact evolution is still ~6e-9 at kt = 8, so that case is only reported.
  const StateSpec s{0.3, 0, 1};
  double at8_vacuum_bath = 0.0;
  for (const PhasePoint &pt : detail::random_points(rng, 25, 2.0)) {
    at8 = std::max(at8, std::abs(wf_evolved_point(s, {8.0, 1.0}, pt) - wf_thermal_limit(1.0, pt)));
    at8_vacuum_bath = std::max(at8_vacuum_bath, std::abs(wf_evolved_point(s, {8.0, 0.0}, pt) -
                                                         wf_thermal_limit(0.0, pt)));
  }
  for (double lam : {0.3, 0.8, 1.5})
    for (double kt : {0.05, 0.1, 0.5, 2.0})
      for (double nbar : {0.0, 1.0, 2.0})
        for (const PhasePoint &pt : detail::random_points(rng, 5, 2.0))
          vac = std::max(vac, std::abs(wf_evolved_vacuum_case({kt, nbar}, lam, pt) -
                                       wf_evolved_point({lam, 0, 0}, {kt, nbar}, pt)));
  CheckResult r;
  r.tolerance = 1e-9;
  r.observed = std::max(at0, at8);
  r.passed = at0 < 1e-9 && at8 < 1e-9 && vac < 1e-12;
  r.detail = "kt=0 " + detail::sci(at0) + ", kt=8 vs thermal product " + detail::sci(at8) +
             " ((0,1), lambda 0.3, nbar 1; nbar 0 gives " + detail::sci(at8_vacuum_bath) +
             "), m=n=0 Gaussian " + detail::sci(vac) + " (tol 1e-12)";
  return r;
}

// 8 ---------------------------------------------------------------------------
inline CheckResult check_threshold(const Options &) {
  const StateSpec s{0.3, 0, 1};
  const double nbar = 1.0;
  const GridRequest req = GridRequest::position_slice(3.0, 61);
  const double ktc = threshold_time(nbar);
  const double ktc_dev = std::abs(ktc - 0.5 * std::log(4.0 / 3.0));
  const double min005 = wf_evolved_grid(s, {0.05, nbar}, req).min_value;
  const double min015 = wf_evolved_grid(s, {0.15, nbar}, req).min_value;
  const double min020 = wf_evolved_grid(s, {0.2, nbar}, req).min_value;
  const WignerGrid at_c = evaluate_grid(req, [&](const PhasePoint &pt) { return wf_at_threshold(s, nbar, pt); });
  double match = 0.0;
  for (int j = 0; j < req.ny; ++j)
    for (int i = 0; i < req.nx; ++i)
      match = std::max(match, std::abs(at_c.at(i, j) - wf_evolved_point(s, {ktc, nbar}, req.point(i, j))));
  CheckResult r;
  r.tolerance = 1e-10;
  r.observed = match;
  r.passed = ktc_dev < 1e-15 && min005 < -1e-4 && min015 >= -1e-10 && min020 >= -1e-10 &&
             at_c.min_value >= 0.0 && match < 1e-10;
  std::ostringstream os;
  os << "kt_c " << ktc << "; grid min kt=0.05 " << detail::sci(min005) << ", kt=0.15 "
     << detail::sci(min015) << ", kt=0.2 " << detail::sci(min020) << "; threshold form min "
     << detail::sci(at_c.min_value) << ", vs evolved " << detail::sci(match);
  r.detail = os.str();
  return r;
}

// 9 ---------------------------------------------------------------------------
inline CheckResult check_kraus(const Options &) {
  double complete = 0.0, trace = 0.0;
  const FockMatrix rho0 = density_matrix({0.3, 0, 1}, 30);
  for (double kt : {0.05, 0.5})
    for (double nbar : {0.0, 1.0, 2.0}) {
      const ChannelSpec ch{kt, nbar};
      complete = std::max(complete, kraus_completeness_defect(ch, 30));
      trace = std::max(trace, std::abs(1.0 - evolve_density(rho0, ch).trace));
    }
  CheckResult r;
  r.tolerance = 1e-8;
  r.observed = complete;
  r.passed = complete < 1e-8 && trace < 1e-6;
  r.detail = "sum M+M interior defect " + detail::sci(complete) + ", trace loss " +
             detail::sci(trace) + " (tol 1e-6)";
  return r;
}

// 10 --------------------------------------------------------------------------
namespace detail {

// Coefficient extraction by the trapezoid rule on |t| = |t'| = 1:
// H_{m,n}(e, f) = m! n! [t^m t'^n] exp(-t t' + e t + f t').
inline cdouble hermite_from_generating_function(int m, int n, cdouble e, cdouble f) {
  const int N = 48;
  cdouble acc = 0.0;
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      const cdouble t = std::polar(1.0, 2 * std::numbers::pi * j / N);
      const cdouble u = std::polar(1.0, 2 * std::numbers::pi * k / N);
      acc += std::exp(-t * u + e * t + f * u) * std::pow(t, -m) * std::pow(u, -n);
    }
  return acc / double(N * N) * specfun::factorial(m) * specfun::factorial(n);
}

} // namespace detail

inline CheckResult check_properties(const Options &o) {
  std::mt19937_64 rng(o.seed + 10);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<std::string> failures;

  double gen = 0.0, deriv = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const cdouble e(u(rng), u(rng)), f(u(rng), u(rng));
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n) {
        const cdouble h = specfun::hermite2(m, n, e, f);
        gen = std::max(gen, std::abs(detail::hermite_from_generating_function(m, n, e, f) - h) /
                                std::max(1.0, std::abs(h)));
      }
    const double step = 1e-5;
    for (int m = 1; m <= 5; ++m)
      for (int n = 0; n <= 5; ++n) {
        const cdouble fd = (specfun::hermite2(m, n, e + step, f) - specfun::hermite2(m, n, e - step, f)) /
                           (2 * step);
        const cdouble want = double(m) * specfun::hermite2(m - 1, n, e, f);
        deriv = std::max(deriv, std::abs(fd - want) / std::max(1.0, std::abs(want)));
      }
  }
  if (gen > 1e-6)
    failures.push_back("generating function " + detail::sci(gen));
  if (deriv > 1e-6)
    failures.push_back("derivative identity " + detail::sci(deriv));

  double support = 0.0, total_dev = 0.0, exch = 0.0;
  for (double lam : {0.3, 0.8, 1.5})
    for (int m = 0; m <= detail::max_mn(o, 5); ++m)
      for (int n = 0; n <= detail::max_mn(o, 5); ++n) {
        const StateSpec s{lam, m, n};
        specfun::CompensatedSum<double> total;
        for (const PndEntry &e : pnd_table(s, default_cutoff(s))) {
          if (e.na + m != e.nb + n)
            support = std::max(support, std::abs(e.probability));
          total += e.probability;
        }
        // the sum may not exceed 1 beyond a few ulps of accumulated rounding
        const double t = total.value();
        total_dev = std::max(total_dev, t > 1.0 ? std::max(0.0, t - 1.0 - 1e-14) : 1.0 - t);
        exch = std::max(exch, detail::rel_dev(normalization(s.swapped()), normalization(s)));
      }
  if (support != 0.0)
    failures.push_back("PND off-line mass " + detail::sci(support));
  if (total_dev > 1e-8)
    failures.push_back("PND total " + detail::sci(total_dev));
  if (exch > 1e-10)
    failures.push_back("exchange symmetry " + detail::sci(exch));

  double g12_min = INFINITY;
  int lam_steps = 40;
  for (auto [m, n] : {std::pair{1, 2}, {3, 4}, {2, 4}, {6, 8}, {3, 6}, {7, 10}})
    for (int k = 1; k <= lam_steps; ++k)
      g12_min = std::min(g12_min, cross_correlation({0.05 * k, m, n}));
  if (!(g12_min > 1.0))
    failures.push_back("g12 minimum " + std::to_string(g12_min));

  double varp_max = 0.0;
  for (int mn : {1, 2, 8})
    for (int k = 1; k <= lam_steps; ++k)
      varp_max = std::max(varp_max, quadrature_variances({0.05 * k, mn, mn}).var_P);
  if (!(varp_max < 0.5))
    failures.push_back("var_P maximum " + std::to_string(varp_max));

  CheckResult r;
  r.tolerance = 1e-6;
  r.observed = std::max(gen, deriv);
  r.passed = failures.empty();
  std::ostringstream os;
  os << "gen fn " << detail::sci(gen) << ", d/de " << detail::sci(deriv) << ", PND total "
     << detail::sci(total_dev) << ", exchange " << detail::sci(exch) << ", min g12 " << g12_min
     << ", max var_P " << varp_max;
  for (const auto &f : failures)
    os << "; FAILED " << f;
  r.detail = os.str();
  return r;
}

// 11 --------------------------------------------------------------------------
inline CheckResult check_figure_structure(const Options &) {
  const StateSpec s{0.5, 1, 3};
  const GridRequest req = GridRequest::momentum_slice(3.0, 61);
  const std::vector<double> prof =
      diagonal_profile(req, [&](const PhasePoint &pt) { return wf_point(s, pt); }, 601);
  const int minima = count_strict_local_minima(prof);
  const int maxima = count_strict_local_maxima(prof);
  CheckResult r;
  r.warning_only = true;
  r.observed = minima;
  r.passed = minima >= 2 && maxima >= 3;
  r.detail = std::to_string(minima) + " local minima, " + std::to_string(maxima) +
             " local maxima on the p1 = p2 diagonal of the (0,0,p1,p2) slice";
  return r;
}

inline std::vector<CheckResult> run_all(const Options &o) {
  using detail::timed;
  return {
      timed(1, "normalization vs Fock sum", [&] { return check_normalization(o); }),
      timed(2, "moments vs operator traces", [&] { return check_moments(o); }),
      timed(3, "closed special cases", [&] { return check_closed_specials(o); }),
      timed(4, "Wigner vs displaced parity", [&] { return check_wigner_oracle(o); }),
      timed(5, "m=0 Laguerre form", [&] { return check_subtract_b_only(o); }),
      timed(6, "channel triangle", [&] { return check_channel_triangle(o); }),
      timed(7, "channel limits", [&] { return check_limits(o); }),
      timed(8, "threshold behaviour", [&] { return check_threshold(o); }),
      timed(9, "Kraus algebra", [&] { return check_kraus(o); }),
      timed(10, "property suites", [&] { return check_properties(o); }),
      timed(11, "(1,3) slice structure", [&] { return check_figure_structure(o); }),
  };
}

inline bool all_required_passed(const std::vector<CheckResult> &rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckResult &r) { return r.passed || r.warning_only; });
}

inline std::string format_line(const CheckResult &r) {
  std::ostringstream os;
  const char *tag = r.passed ? "PASS" : (r.warning_only ? "WARN" : "FAIL");
  os << "[" << tag << "] " << r.id << " " << r.name << ": observed " << detail::sci(r.observed);
  if (r.tolerance > 0)
    os << " tol " << detail::sci(r.tolerance);
  os << " | " << r.detail << " (" << std::fixed;
  os.precision(2);
  os << r.seconds << " s)";
  return os.str();
}

} // namespace tpssv::verify
