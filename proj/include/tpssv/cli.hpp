#pragma once

// Command-line front end: info, pnd, moments-sweep, wigner, evolve-sweep,
// threshold, verify. Exit codes: 0 ok, 1 verification failure, 2 invalid
// input, 3 resource or convergence limit.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tpssv/channel.hpp"
#include "tpssv/errors.hpp"
#include "tpssv/io.hpp"
#include "tpssv/moments.hpp"
#include "tpssv/state.hpp"
#include "tpssv/verify.hpp"
#include "tpssv/wigner.hpp"

namespace tpssv::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kLimit = 3 };

struct RunConfig {
  double lambda = 0.5;
  int m = 0;
  int n = 0;
  double nbar = 0.0;
  double kappa_t = 0.0;
  int cutoff = 0; // 0: chosen from the tail tolerance
  std::string output;

  // grids
  std::string slice = "p1p2";
  std::string x_axis = "p1";
  std::string y_axis = "p2";
  std::vector<double> fixed{0.0, 0.0, 0.0, 0.0};
  double range = 3.0;
  int points = 61;
  unsigned threads = 0;

  // sweeps
  double lambda_min = 0.05;
  double lambda_max = 2.0;
  int lambda_steps = 40;
  std::vector<std::string> pairs; // "m:n"
  std::vector<double> kappa_t_list{0.0, 0.05, 0.1, 0.2};

  bool bracket = false;
  bool quick = false;
  bool inject_fault = false;

  StateSpec spec() const { return {lambda, m, n}; }
  ChannelSpec channel() const { return {kappa_t, nbar}; }

  GridRequest grid() const {
    GridRequest g;
    if (slice == "p1p2")
      g = GridRequest::momentum_slice(range, points);
    else if (slice == "q1q2")
      g = GridRequest::position_slice(range, points);
    else if (slice == "custom") {
      g.x_axis = parse_axis(x_axis);
      g.y_axis = parse_axis(y_axis);
      if (fixed.size() != 4)
        throw ValidationError("--fixed takes four values q1,p1,q2,p2");
      for (int k = 0; k < 4; ++k)
        g.fixed[k] = fixed[k];
      g.x_min = g.y_min = -range;
      g.x_max = g.y_max = range;
      g.nx = g.ny = points;
    } else {
      throw ValidationError("--slice must be p1p2, q1q2 or custom");
    }
    if (!(range > 0.0) || !std::isfinite(range))
      throw ValidationError("--range must be finite and > 0");
    g.validate();
    return g;
  }

  std::vector<StateSpec> sweep_specs(double lam) const {
    std::vector<StateSpec> out;
    if (pairs.empty()) {
      out.push_back({lam, m, n});
      return out;
    }
    for (const std::string &p : pairs) {
      const auto colon = p.find(':');
      if (colon == std::string::npos)
        throw ValidationError("--pairs entries look like m:n (got '" + p + "')");
      try {
        out.push_back({lam, std::stoi(p.substr(0, colon)), std::stoi(p.substr(colon + 1))});
      } catch (const std::logic_error &) {
        throw ValidationError("--pairs entries look like m:n (got '" + p + "')");
      }
    }
    return out;
  }
};

namespace detail {

inline nlohmann::json spec_json(const StateSpec &s) {
  return {{"lambda", s.lambda}, {"m", s.m}, {"n", s.n}};
}

inline nlohmann::json point_json(const PhasePoint &pt) {
  const auto q = pt.quadratures();
  return {{"q1", q[0]}, {"p1", q[1]}, {"q2", q[2]}, {"p2", q[3]}};
}

/// Writes to --output (atomically) or to `out` when no path is given.
inline void emit(const RunConfig &c, std::ostream &out, const std::string &text) {
  if (c.output.empty())
    out << text;
  else
    io::write_atomic(c.output, text);
}

/// Sidecar next to --output (same path + ".json"); without --output it goes to `err`.
inline void emit_sidecar(const RunConfig &c, std::ostream &err, const nlohmann::json &j) {
  if (c.output.empty())
    err << io::dump(j);
  else
    io::write_atomic(c.output + ".json", io::dump(j));
}

inline int resolved_cutoff(const RunConfig &c, const StateSpec &s) {
  return c.cutoff > 0 ? c.cutoff : default_cutoff(s);
}

inline std::string wigner_csv(const WignerGrid &g) {
  io::CsvBuilder csv{"x", "y", "W"};
  for (int j = 0; j < g.request.ny; ++j)
    for (int i = 0; i < g.request.nx; ++i)
      csv.row(g.request.x_at(i), g.request.y_at(j), g.at(i, j));
  return csv.str();
}

} // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_info(const RunConfig &c, std::ostream &out) {
  const StateSpec s = c.spec();
  s.validate();
  c.channel().validate();
  const MomentSet mom = moments(s);
  const QuadratureReport q = quadrature_variances(s);
  nlohmann::json j = detail::spec_json(s);
  j["normalization"] = normalization(s);
  j["tau"] = mom.tau;
  j["mean_na"] = mom.mean_na;
  j["mean_nb"] = mom.mean_nb;
  j["cross_nanb"] = mom.cross_nanb;
  j["mean_ab"] = mom.mean_ab;
  j["var_Q"] = q.var_Q;
  j["var_P"] = q.var_P;
  j["uncertainty_product"] = q.uncertainty_product;
  j["p_squeezed"] = q.p_squeezed;
  j["g12"] = cross_correlation(s);
  j["R_ab"] = antibunching(s);
  j["nbar"] = c.nbar;
  j["kt_c"] = threshold_time(c.nbar);
  detail::emit(c, out, io::dump(j));
  return kOk;
}

inline int cmd_pnd(const RunConfig &c, std::ostream &out, std::ostream &err) {
  const StateSpec s = c.spec();
  s.validate();
  const int cutoff = detail::resolved_cutoff(c, s);
  // rejects a user cutoff that truncates too much of the state
  fock_amplitudes(s, cutoff);
  io::CsvBuilder csv{"n_a", "n_b", "probability"};
  specfun::CompensatedSum<double> total;
  for (const PndEntry &e : pnd_table(s, cutoff)) {
    csv.row(e.na, e.nb, e.probability);
    total += e.probability;
  }
  detail::emit(c, out, csv.str());
  nlohmann::json meta = detail::spec_json(s);
  meta["cutoff"] = cutoff;
  meta["norm"] = normalization(s);
  meta["probability_sum"] = total.value();
  detail::emit_sidecar(c, err, meta);
  return kOk;
}

inline int cmd_moments_sweep(const RunConfig &c, std::ostream &out) {
  if (c.lambda_steps < 1 || c.lambda_steps > 100000)
    throw ValidationError("--lambda-steps must lie in [1, 100000]");
  if (!(c.lambda_min > 0.0) || !(c.lambda_max >= c.lambda_min) || !std::isfinite(c.lambda_max))
    throw ValidationError("lambda range must satisfy 0 < lambda-min <= lambda-max");
  std::vector<double> lams;
  for (int k = 0; k < c.lambda_steps; ++k)
    lams.push_back(c.lambda_steps == 1 ? c.lambda_min
                                       : c.lambda_min + (c.lambda_max - c.lambda_min) * k /
                                                            (c.lambda_steps - 1));
  for (double lam : lams)
    for (const StateSpec &s : c.sweep_specs(lam))
      s.validate();

  io::CsvBuilder csv{"lambda", "m", "n", "mean_na", "mean_nb", "var_Q", "var_P", "g12", "R_ab"};
  for (const StateSpec &first : c.sweep_specs(lams.front()))
    for (double lam : lams) {
      const StateSpec s{lam, first.m, first.n};
      const MomentSet mom = moments(s);
      const QuadratureReport q = quadrature_variances(s);
      csv.row(lam, s.m, s.n, mom.mean_na, mom.mean_nb, q.var_Q, q.var_P, cross_correlation(s),
              antibunching(s));
    }
  detail::emit(c, out, csv.str());
  return kOk;
}

inline int cmd_wigner(const RunConfig &c, std::ostream &out, std::ostream &err) {
  const StateSpec s = c.spec();
  const ChannelSpec ch = c.channel();
  s.validate();
  ch.validate();
  const GridRequest req = c.grid();
  const WignerGrid g = wf_evolved_grid(s, ch, req, c.threads);
  detail::emit(c, out, detail::wigner_csv(g));

  nlohmann::json side;
  side["slice"] = c.slice == "custom" ? req.slice_name() : c.slice;
  side["x_axis"] = axis_name(req.x_axis);
  side["y_axis"] = axis_name(req.y_axis);
  side["fixed"] = {{"q1", req.fixed[0]}, {"p1", req.fixed[1]}, {"q2", req.fixed[2]}, {"p2", req.fixed[3]}};
  side["range"] = {req.x_min, req.x_max};
  side["points"] = req.nx;
  side["spec"] = detail::spec_json(s);
  side["channel"] = {{"kappa_t", ch.kappa_t}, {"nbar", ch.nbar}};
  side["min_value"] = g.min_value;
  side["min_location"] = detail::point_json(g.min_location);
  side["negative_fraction"] = g.negative_fraction;
  detail::emit_sidecar(c, err, side);
  return kOk;
}

inline int cmd_evolve_sweep(const RunConfig &c, std::ostream &out) {
  const StateSpec s = c.spec();
  s.validate();
  if (c.kappa_t_list.empty())
    throw ValidationError("--kappa-t-list must not be empty");
  for (double kt : c.kappa_t_list)
    ChannelSpec{kt, c.nbar}.validate();
  const GridRequest req = c.grid();
  io::CsvBuilder csv{"kappa_t", "nbar", "lambda", "m", "n", "grid_min", "negative_fraction"};
  for (double kt : c.kappa_t_list) {
    const WignerGrid g = wf_evolved_grid(s, {kt, c.nbar}, req, c.threads);
    csv.row(kt, c.nbar, s.lambda, s.m, s.n, g.min_value, g.negative_fraction);
  }
  detail::emit(c, out, csv.str());
  return kOk;
}

/// Earliest kappa_t (to 1e-6) from which the sampled grid has no value below
/// -1e-10, searched on [0, kt_c]. Assumes the grid minimum rises monotonically.
inline double grid_positivity_time(const StateSpec &s, double nbar, const GridRequest &req,
                                   unsigned threads) {
  auto positive = [&](double kt) {
    return wf_evolved_grid(s, {kt, nbar}, req, threads).min_value >= -1e-10;
  };
  double lo = 0.0, hi = threshold_time(nbar);
  if (positive(lo))
    return 0.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (positive(mid) ? hi : lo) = mid;
  }
  return hi;
}

inline int cmd_threshold(const RunConfig &c, std::ostream &out) {
  ChannelSpec{0.0, c.nbar}.validate();
  nlohmann::json j;
  j["nbar"] = c.nbar;
  j["kt_c"] = threshold_time(c.nbar);
  if (c.bracket) {
    const StateSpec s = c.spec();
    s.validate();
    const GridRequest req = c.grid();
    j["spec"] = detail::spec_json(s);
    j["slice"] = c.slice;
    j["grid_positivity_kt"] = grid_positivity_time(s, c.nbar, req, c.threads);
  }
  detail::emit(c, out, io::dump(j));
  return kOk;
}

inline int cmd_verify(const RunConfig &c, std::ostream &out) {
  verify::Options opt;
  opt.quick = c.quick;
  opt.perturb_normalization = c.inject_fault;
  const auto results = verify::run_all(opt);
  nlohmann::json report = nlohmann::json::array();
  for (const auto &r : results) {
    out << verify::format_line(r) << "\n";
    report.push_back({{"id", r.id},
                      {"name", r.name},
                      {"passed", r.passed},
                      {"warning_only", r.warning_only},
                      {"tolerance", r.tolerance},
                      {"observed", r.observed},
                      {"detail", r.detail},
                      {"seconds", r.seconds}});
  }
  if (!c.output.empty())
    io::write_atomic(c.output, io::dump(report));
  return verify::all_required_passed(results) ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------

namespace detail {

/// Applies keys from a JSON config file to every option not given on the
/// command line. Keys are the long flag names without dashes ("kappa-t" or
/// "kappa_t" both work).
inline void apply_config(CLI::App &app, const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw ValidationError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object())
    throw ValidationError("config file must hold a JSON object");
  CLI::App *sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
  for (const auto &[key, value] : j.items()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option *opt = nullptr;
    for (CLI::App *scope : {sub, &app}) {
      try {
        opt = scope->get_option("--" + flag);
        break;
      } catch (const CLI::OptionNotFound &) {
      }
    }
    if (!opt)
      throw ValidationError("config key '" + key + "' does not match any option");
    if (opt->count() > 0)
      continue; // command line wins
    std::vector<std::string> vals;
    auto scalar = [](const nlohmann::json &v) {
      if (v.is_string())
        return v.get<std::string>();
      if (v.is_boolean())
        return std::string(v.get<bool>() ? "true" : "false");
      return v.dump();
    };
    if (value.is_array())
      for (const auto &v : value)
        vals.push_back(scalar(v));
    else
      vals.push_back(scalar(value));
    opt->clear();
    try {
      opt->add_result(vals);
      opt->run_callback();
    } catch (const CLI::Error &e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
  }
}

} // namespace detail

/// Parses and dispatches; every failure becomes a message on `err` and an exit code.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
  CLI::App app{"Photon-subtracted two-mode squeezed vacuum: statistics, Wigner functions and "
               "thermal decoherence"};
  app.require_subcommand(1);
  RunConfig c;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option values; flags override it");

  auto state_opts = [&](CLI::App *sub) {
    sub->add_option("--lambda", c.lambda, "squeezing parameter (> 0)");
    sub->add_option("--m", c.m, "photons subtracted from mode a (0..10)");
    sub->add_option("--n", c.n, "photons subtracted from mode b (0..10)");
  };
  auto channel_opts = [&](CLI::App *sub) {
    sub->add_option("--nbar", c.nbar, "thermal photon number of the bath");
    sub->add_option("--kappa-t", c.kappa_t, "decay time kappa*t (0 = no channel)");
  };
  auto grid_opts = [&](CLI::App *sub) {
    sub->add_option("--slice", c.slice, "p1p2 (q1=q2=0), q1q2 (p1=p2=0) or custom");
    sub->add_option("--x-axis", c.x_axis, "custom slice: horizontal axis (q1,p1,q2,p2)");
    sub->add_option("--y-axis", c.y_axis, "custom slice: vertical axis");
    sub->add_option("--fixed", c.fixed, "custom slice: q1 p1 q2 p2 for the fixed axes")->expected(4);
    sub->add_option("--range", c.range, "half-width of the square slice");
    sub->add_option("--points", c.points, "samples per axis");
    sub->add_option("--threads", c.threads, "worker threads (0 = hardware)");
  };
  auto output_opt = [&](CLI::App *sub) {
    sub->add_option("--output", c.output, "output file (default: stdout)");
  };

  CLI::App *info = app.add_subcommand("info", "normalization, moments, variances, g12, R_ab, kt_c");
  state_opts(info);
  channel_opts(info);
  output_opt(info);

  CLI::App *pnd = app.add_subcommand("pnd", "photon-number distribution as CSV");
  state_opts(pnd);
  pnd->add_option("--cutoff", c.cutoff, "largest photon number per mode (default: automatic)");
  output_opt(pnd);

  CLI::App *sweep = app.add_subcommand("moments-sweep", "moments over a lambda range as CSV");
  state_opts(sweep);
  sweep->add_option("--lambda-min", c.lambda_min);
  sweep->add_option("--lambda-max", c.lambda_max);
  sweep->add_option("--lambda-steps", c.lambda_steps);
  sweep->add_option("--pairs", c.pairs, "several m:n pairs instead of --m/--n");
  output_opt(sweep);

  CLI::App *wig = app.add_subcommand("wigner", "Wigner function on a 2D slice as CSV");
  state_opts(wig);
  channel_opts(wig);
  grid_opts(wig);
  output_opt(wig);

  CLI::App *evo = app.add_subcommand("evolve-sweep", "grid minimum and negativity versus kappa*t");
  state_opts(evo);
  evo->add_option("--nbar", c.nbar, "thermal photon number of the bath");
  evo->add_option("--kappa-t-list", c.kappa_t_list, "decay times to evaluate");
  grid_opts(evo);
  output_opt(evo);

  CLI::App *thr = app.add_subcommand("threshold", "decay time beyond which the Wigner function is nonnegative");
  state_opts(thr);
  thr->add_option("--nbar", c.nbar, "thermal photon number of the bath");
  thr->add_flag("--bracket", c.bracket, "also search the grid-positivity time for the given state");
  grid_opts(thr);
  output_opt(thr);

  CLI::App *ver = app.add_subcommand("verify", "run the acceptance checks");
  ver->add_flag("--quick", c.quick, "restrict to m, n <= 2");
  ver->add_flag("--inject-fault", c.inject_fault, "perturb the normalization (tests the suite)")
      ->group("");
  output_opt(ver);

  try {
    app.parse(argc, argv);
    if (!config_path.empty())
      detail::apply_config(app, config_path);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    if (info->parsed())
      return cmd_info(c, out);
    if (pnd->parsed())
      return cmd_pnd(c, out, err);
    if (sweep->parsed())
      return cmd_moments_sweep(c, out);
    if (wig->parsed())
      return cmd_wigner(c, out, err);
    if (evo->parsed())
      return cmd_evolve_sweep(c, out);
    if (thr->parsed())
      return cmd_threshold(c, out);
    return cmd_verify(c, out);
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const CutoffTooSmall &e) {
    err << "error: " << e.what() << " (need about " << e.required_cutoff << ")\n";
    return kInvalid;
  } catch (const ResourceLimit &e) {
    err << "error: " << e.what() << "\n";
    return kLimit;
  } catch (const ConvergenceError &e) {
    err << "error: " << e.what() << "\n";
    return kLimit;
  } catch (const std::domain_error &e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
}

} // namespace tpssv::cli
