#include "pvt_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvt/equilibria.hpp"
#include "pvt/error.hpp"
#include "pvt/ode.hpp"
#include "pvt/pde.hpp"
#include "pvt/serialize.hpp"
#include "pvt/transition.hpp"

#ifndef PVT_VERSION
#define PVT_VERSION "0.0.0"
#endif

namespace pvt::cli {
namespace {

struct Options {
  std::string model_path;
  std::optional<double> T, p, rho0, rho1, S0;
  std::optional<double> p_min, p_max, T_min, T_max;
  std::optional<double> steps;
  std::optional<double> dt, t_end;
  std::optional<std::string> scheme;
  std::optional<double> n, length, amplitude, snapshots, energy_tol;
  std::string flow = "coupled";
  std::string init = "uniform";
  std::string out;
  std::string rows_out;
  std::string manifest;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParseError:
    case ErrorKind::OutOfValidityBox:
    case ErrorKind::PositivityViolation:
      return kInputError;
    case ErrorKind::NoConvergence:
    case ErrorKind::SingularJacobian:
    case ErrorKind::StepSizeUnderflow:
      return kNoConvergence;
    default:
      return kContractViolation;
  }
}

[[noreturn]] void input_error(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

double require(const std::optional<double>& v, const char* flag) {
  if (!v) input_error(std::string("missing required flag ") + flag);
  if (!std::isfinite(*v)) input_error(std::string(flag) + " must be finite");
  return *v;
}

int as_count(const std::optional<double>& v, int fallback, int min, const char* flag) {
  if (!v) return fallback;
  const double x = *v;
  if (!(x == std::floor(x)) || x < min || x > 1e8) {
    input_error(std::string(flag) + " must be an integer >= " + std::to_string(min));
  }
  return static_cast<int>(x);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class Run {
 public:
  Run(int argc, const char* const* argv, std::string command, const Options& opt)
      : command_(std::move(command)), opt_(opt) {
    for (int i = 0; i < argc; ++i) argv_.emplace_back(argv[i]);
    model_ = load_model(opt.model_path);
  }

  const CoefficientModel& model() const { return model_; }
  const Options& opt() const { return opt_; }

  ThermoState state() const {
    const ThermoState s{require(opt_.T, "--T"), require(opt_.p, "--p")};
    if (!(s.T > 0.0) || !(s.p > 0.0)) throw Error(ErrorKind::PositivityViolation, "T and p must be > 0");
    if (!model_.box.contains(s)) throw Error(ErrorKind::OutOfValidityBox, "state outside the model's box");
    return s;
  }

  SweepWindow window() const {
    SweepWindow w{opt_.T_min.value_or(model_.box.T_min), opt_.T_max.value_or(model_.box.T_max), 400};
    if (!(w.T_min < w.T_max)) input_error("empty temperature range");
    if (w.T_min < model_.box.T_min || w.T_max > model_.box.T_max) {
      throw Error(ErrorKind::OutOfValidityBox, "temperature range outside the model's box");
    }
    return w;
  }

  struct PressureRange {
    double lo, hi;
    int count;
  };

  PressureRange pressures(int default_count) const {
    const double lo = require(opt_.p_min, "--p-min");
    const double hi = require(opt_.p_max, "--p-max");
    const int count = as_count(opt_.steps, default_count, 1, "--steps");
    if (!(lo <= hi) || (count > 1 && lo == hi)) input_error("empty pressure range");
    if (!(lo > 0.0)) throw Error(ErrorKind::PositivityViolation, "pressures must be > 0");
    if (lo < model_.box.p_min || hi > model_.box.p_max) {
      throw Error(ErrorKind::OutOfValidityBox, "pressure range outside the model's box");
    }
    return {lo, hi, count};
  }

  void config(const std::string& key, json value) { config_[key] = std::move(value); }
  void extra(const std::string& key, json value) { extra_[key] = std::move(value); }

  void write(const std::string& path, const std::string& content) {
    write_atomic(path, content);
    outputs_.push_back(path);
  }

  /// Writes to `path`, or to `out` when the path is empty.
  void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
      out << content;
    } else {
      write(path, content);
    }
  }

  void finish(const std::string& fallback_manifest) {
    const std::string path = !opt_.manifest.empty() ? opt_.manifest : fallback_manifest;
    if (path.empty()) return;
    std::string cmdline;
    for (const auto& a : argv_) cmdline += (cmdline.empty() ? "" : " ") + a;
    json m{{"command", command_},
           {"command_line", cmdline},
           {"argv", argv_},
           {"model_hash", model_hash_hex(model_)},
           {"model", to_json(model_)},
           {"config", config_},
           {"tool_version", PVT_VERSION},
           {"timestamp", utc_timestamp()},
           {"outputs", outputs_}};
    for (auto it = extra_.begin(); it != extra_.end(); ++it) m[it.key()] = it.value();
    write_atomic(path, m.dump(2) + "\n");
  }

 private:
  std::string command_;
  Options opt_;
  std::vector<std::string> argv_;
  CoefficientModel model_;
  json config_ = json::object();
  json extra_ = json::object();
  std::vector<std::string> outputs_;
};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// --- commands -------------------------------------------------------------------

int cmd_classify(Run& run, std::ostream& out) {
  const auto s = run.state();
  run.config("T", s.T);
  run.config("p", s.p);
  run.config("rho0", optional_number(run.opt().rho0));
  const auto report = classify(run.model(), s, run.opt().rho0);
  run.emit(run.opt().out, to_json(report).dump(2) + "\n", out);
  run.finish("");
  return kSuccess;
}

int cmd_andrews(Run& run, std::ostream& out) {
  const auto s = run.state();
  const double rho = run.opt().rho0 ? *run.opt().rho0 : critical_reference_root(run.model(), s);
  run.config("T", s.T);
  run.config("p", s.p);
  run.config("rho0", rho);
  const auto point = andrews_point(run.model(), AndrewsGuess{rho, s.T, s.p});
  run.emit(run.opt().out, to_json(point).dump(2) + "\n", out);
  run.finish("");
  return kSuccess;
}

int cmd_curve(Run& run, std::ostream& out) {
  const auto range = run.pressures(21);
  const auto w = run.window();
  run.config("p_min", range.lo);
  run.config("p_max", range.hi);
  run.config("steps", range.count);
  run.config("T_min", w.T_min);
  run.config("T_max", w.T_max);
  const auto curve = critical_curve_trace(run.model(), range.lo, range.hi, range.count, w);
  run.emit(run.opt().out, critical_curve_csv(curve), out);
  run.extra("skipped", curve.skipped);
  run.extra("monotone", curve.monotone);
  run.extra("slope_sign", curve.slope_sign);
  run.finish(run.opt().out.empty() ? "" : run.opt().out + ".manifest.json");
  return kSuccess;
}

int cmd_bifurcation(Run& run, std::ostream& out) {
  const double p = require(run.opt().p, "--p");
  const auto w = run.window();
  const int count = as_count(run.opt().steps, 201, 2, "--steps");
  run.config("p", p);
  run.config("T_min", w.T_min);
  run.config("T_max", w.T_max);
  run.config("steps", count);
  const auto rows = bifurcation_diagram(run.model(), p, w, count);
  run.emit(run.opt().out, bifurcation_csv(rows), out);
  if (!run.opt().rows_out.empty()) {
    const TransitionFunctions tf(run.model(), p, w);
    run.write(run.opt().rows_out, transition_rows_csv(tf.rows(w.T_min, w.T_max, count)));
    run.extra("T0", tf.T0());
    run.extra("T_star", optional_number(tf.T_star()));
    run.extra("T1", optional_number(tf.T1()));
  }
  run.finish(run.opt().out.empty() ? "" : run.opt().out + ".manifest.json");
  return kSuccess;
}

int cmd_coexistence(Run& run, std::ostream& out) {
  const auto range = run.pressures(10);
  const auto w = run.window();
  run.config("p_min", range.lo);
  run.config("p_max", range.hi);
  run.config("steps", range.count);
  run.config("T_min", w.T_min);
  run.config("T_max", w.T_max);
  const auto curve = coexistence_trace(run.model(), range.lo, range.hi, range.count, w);
  run.emit(run.opt().out, coexistence_csv(curve), out);
  run.extra("skipped", curve.skipped);
  double worst = 0.0;
  for (const auto& s : curve.samples) worst = std::max(worst, std::abs(s.residual()));
  run.extra("max_clapeyron_residual", worst);
  run.finish(run.opt().out.empty() ? "" : run.opt().out + ".manifest.json");
  return kSuccess;
}

IntegratorConfig ode_config(const Options& opt) {
  IntegratorConfig cfg;
  if (opt.scheme) cfg.scheme = ode_scheme_from_string(*opt.scheme);
  if (opt.dt) cfg.dt = *opt.dt;
  if (opt.t_end) cfg.t_end = *opt.t_end;
  cfg.validate();
  return cfg;
}

double default_density(const ThermoState& s, const CoefficientModel& model) {
  return gas_branch_select(full_steady_states(s, model));
}

int cmd_simulate_ode(Run& run, std::ostream& out, std::ostream& err) {
  const auto s = run.state();
  const auto& model = run.model();
  const auto cfg = ode_config(run.opt());
  const double rho = run.opt().rho0 ? *run.opt().rho0 : default_density(s, model);
  const double energy_tol = run.opt().energy_tol.value_or(1e-9);
  if (run.opt().flow != "coupled" && run.opt().flow != "full") input_error("--flow must be coupled or full");
  const bool coupled = run.opt().flow == "coupled";
  const double S = run.opt().S0 ? *run.opt().S0 : eliminate_entropy(rho, s, model);

  run.config("T", s.T);
  run.config("p", s.p);
  run.config("rho0", rho);
  if (coupled) run.config("S0", S);
  run.config("flow", run.opt().flow);
  run.config("energy_tol", energy_tol);
  run.config("integrator", to_json(cfg));

  const auto traj = coupled ? integrate_coupled(s, model, rho, S, cfg) : integrate_full(s, model, rho, cfg);
  const double increase = lyapunov_audit(traj, coupled ? coupled_energy(s, model) : full_energy(s, model));
  const bool ok = !(increase > energy_tol);

  run.emit(run.opt().out, trajectory_csv(traj), out);
  run.extra("trajectory", to_json(traj, cfg));
  run.extra("audit", json{{"max_energy_increase", increase}, {"tolerance", energy_tol}, {"ok", ok}});
  run.finish(run.opt().out.empty() ? "" : run.opt().out + ".manifest.json");
  if (!ok) {
    err << "energy audit failed: max increase " << increase << " > " << energy_tol << "\n";
    return kContractViolation;
  }
  return kSuccess;
}

std::string snapshot_path(const std::string& prefix, std::size_t k) {
  std::ostringstream os;
  os << prefix << '_' << std::setw(4) << std::setfill('0') << k << ".csv";
  return os.str();
}

int cmd_simulate_pde(Run& run, std::ostream& err) {
  const auto s = run.state();
  const auto& model = run.model();
  const auto& opt = run.opt();
  if (opt.out.empty()) input_error("simulate-pde needs --out PREFIX");

  PdeConfig cfg;
  if (opt.dt) cfg.dt = *opt.dt;
  if (opt.t_end) cfg.t_end = *opt.t_end;
  if (opt.scheme) cfg.scheme = pde_scheme_from_string(*opt.scheme);
  cfg.snapshots = as_count(opt.snapshots, cfg.snapshots, 1, "--snapshots");
  cfg.energy_tol = opt.energy_tol.value_or(cfg.energy_tol);
  cfg.validate();

  const int n = as_count(opt.n, 101, 3, "--n");
  const double length = opt.length.value_or(1.0);
  if (!(length > 0.0)) input_error("--length must be > 0");
  const double amplitude = opt.amplitude.value_or(0.01);

  const auto set = full_steady_states(s, model);
  double rho_left = opt.rho0 ? *opt.rho0 : default_density(s, model);
  Field1D f = Field1D::uniform(n, length / (n - 1), rho_left, 0.0);
  if (opt.init == "mode") {
    for (int i = 0; i < n; ++i) f.rho[i] += amplitude * std::cos(M_PI * f.x(i) / length);
  } else if (opt.init == "front") {
    double rho_right = 0.0;
    if (opt.rho1) {
      rho_right = *opt.rho1;
    } else {
      bool found = false;
      for (const auto& e : set.equilibria) {
        if (e.stable()) {
          rho_right = e.rho;
          found = true;
        }
      }
      if (!found) throw Error(ErrorKind::NoStableRoot, "no stable steady state for the right half");
    }
    for (int i = 0; i < n; ++i) {
      if (2 * i >= n - 1) f.rho[i] = rho_right;
    }
    run.config("rho1", rho_right);
  } else if (opt.init != "uniform") {
    input_error("--init must be uniform, mode or front");
  }
  for (int i = 0; i < n; ++i) f.S[i] = opt.S0 ? *opt.S0 : eliminate_entropy(f.rho[i], s, model);

  run.config("T", s.T);
  run.config("p", s.p);
  run.config("rho0", rho_left);
  run.config("S0", optional_number(opt.S0));
  run.config("init", opt.init);
  run.config("amplitude", amplitude);
  run.config("pde", to_json(cfg));
  run.extra("grid", json{{"n", n}, {"h", f.h}, {"length", length}});

  const auto res = simulate(f, s, model, cfg);

  json times = json::array();
  json fluxes = json::array();
  for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
    const auto& snap = res.snapshots[k];
    run.write(snapshot_path(opt.out, k), snapshot_csv(snap.fields));
    times.push_back(snap.t);
    fluxes.push_back(json{{"left", snap.flux.left}, {"right", snap.flux.right}});
  }
  run.extra("snapshot_times", times);
  run.extra("boundary_flux", fluxes);
  json energy = json::array();
  for (const auto& [t, e] : res.energy) energy.push_back(json::array({t, e}));
  run.extra("energy", energy);
  run.extra("audit", json{{"max_energy_increase", res.max_energy_increase},
                          {"tolerance", cfg.energy_tol},
                          {"ok", res.energy_ok},
                          {"steps", res.steps}});

  if (opt.init == "uniform") {
    IntegratorConfig ode;
    ode.abs_tol = 1e-12;
    ode.rel_tol = 1e-12;
    ode.dt = std::min(cfg.dt, 1e-3);
    double worst = 0.0;
    for (const auto& snap : res.snapshots) {
      if (snap.t == 0.0) continue;
      ode.t_end = snap.t;
      const auto term = integrate_coupled(s, model, f.rho[0], f.S[0], ode).terminal();
      for (int i = 0; i < n; ++i) {
        worst = std::max({worst, std::abs(snap.fields.rho[i] - term.rho), std::abs(snap.fields.S[i] - term.S)});
      }
    }
    run.extra("ode_max_deviation", worst);
  }
  run.finish(opt.out + ".json");

  if (!res.energy_ok) {
    err << "energy audit failed: max increase " << res.max_energy_increase << " > " << cfg.energy_tol << "\n";
    return kContractViolation;
  }
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase transitions of PVT systems: analysis and simulation", "pvt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PVT_VERSION);
  Options opt;

  auto model_flag = [&](CLI::App* sub) { sub->add_option("--model", opt.model_path, "model JSON")->required(); };
  auto state_flags = [&](CLI::App* sub) {
    sub->add_option("--T", opt.T, "temperature");
    sub->add_option("--p", opt.p, "pressure");
    sub->add_option("--rho0", opt.rho0, "reference or initial density");
  };
  auto window_flags = [&](CLI::App* sub) {
    sub->add_option("--T-min", opt.T_min, "lower temperature of the window");
    sub->add_option("--T-max", opt.T_max, "upper temperature of the window");
  };
  auto range_flags = [&](CLI::App* sub) {
    sub->add_option("--p-min", opt.p_min, "lowest pressure");
    sub->add_option("--p-max", opt.p_max, "highest pressure");
    sub->add_option("--steps", opt.steps, "number of samples");
  };
  auto output_flags = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "output path");
    sub->add_option("--manifest", opt.manifest, "run manifest path");
  };

  auto* classify_cmd = app.add_subcommand("classify", "transition type and order at a critical state");
  model_flag(classify_cmd);
  state_flags(classify_cmd);
  output_flags(classify_cmd);

  auto* andrews_cmd = app.add_subcommand("andrews", "critical point where lambda and a2 vanish together");
  model_flag(andrews_cmd);
  state_flags(andrews_cmd);
  output_flags(andrews_cmd);

  auto* curve_cmd = app.add_subcommand("curve", "critical curve T(p) as CSV");
  model_flag(curve_cmd);
  range_flags(curve_cmd);
  window_flags(curve_cmd);
  output_flags(curve_cmd);

  auto* bif_cmd = app.add_subcommand("bifurcation", "steady states along an isobar as CSV");
  model_flag(bif_cmd);
  bif_cmd->add_option("--p", opt.p, "pressure");
  bif_cmd->add_option("--steps", opt.steps, "number of temperatures");
  window_flags(bif_cmd);
  output_flags(bif_cmd);
  bif_cmd->add_option("--rows-out", opt.rows_out, "transition-function rows CSV");

  auto* coex_cmd = app.add_subcommand("coexistence", "first-order coexistence curve as CSV");
  model_flag(coex_cmd);
  range_flags(coex_cmd);
  window_flags(coex_cmd);
  output_flags(coex_cmd);

  auto sim_flags = [&](CLI::App* sub) {
    model_flag(sub);
    state_flags(sub);
    sub->add_option("--S0", opt.S0, "initial entropy (slaved value by default)");
    sub->add_option("--dt", opt.dt, "time step");
    sub->add_option("--t-end", opt.t_end, "final time");
    sub->add_option("--scheme", opt.scheme, "time-stepping scheme");
    sub->add_option("--energy-tol", opt.energy_tol, "largest allowed energy increase per step");
    output_flags(sub);
  };

  auto* ode_cmd = app.add_subcommand("simulate-ode", "homogeneous trajectory");
  sim_flags(ode_cmd);
  ode_cmd->add_option("--flow", opt.flow, "coupled or full");

  auto* pde_cmd = app.add_subcommand("simulate-pde", "1-D reaction-diffusion run");
  sim_flags(pde_cmd);
  pde_cmd->add_option("--n", opt.n, "grid nodes");
  pde_cmd->add_option("--length", opt.length, "domain length");
  pde_cmd->add_option("--init", opt.init, "uniform, mode or front");
  pde_cmd->add_option("--amplitude", opt.amplitude, "perturbation amplitude for --init mode");
  pde_cmd->add_option("--rho1", opt.rho1, "right-half density for --init front");
  pde_cmd->add_option("--snapshots", opt.snapshots, "number of snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  auto* sub = app.get_subcommands().front();
  try {
    Run run(argc, argv, sub->get_name(), opt);
    if (sub == classify_cmd) return cmd_classify(run, out);
    if (sub == andrews_cmd) return cmd_andrews(run, out);
    if (sub == curve_cmd) return cmd_curve(run, out);
    if (sub == bif_cmd) return cmd_bifurcation(run, out);
    if (sub == coex_cmd) return cmd_coexistence(run, out);
    if (sub == ode_cmd) return cmd_simulate_ode(run, out, err);
    return cmd_simulate_pde(run, err);
  } catch (const Error& e) {
    err << "pvt " << sub->get_name() << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "pvt " << sub->get_name() << ": " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace pvt::cli
