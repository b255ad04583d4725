#include "pvt/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pvt/error.hpp"

namespace pvt {

std::string_view to_string(OdeScheme scheme) noexcept {
  return scheme == OdeScheme::Rk4Fixed ? "rk4_fixed" : "rk45_adaptive";
}

OdeScheme ode_scheme_from_string(std::string_view name) {
  if (name == "rk4_fixed") return OdeScheme::Rk4Fixed;
  if (name == "rk45_adaptive") return OdeScheme::Rk45Adaptive;
  throw Error(ErrorKind::InvalidArgument, "unknown ODE scheme '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be > 0");
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be > 0");
  if (!(convergence_eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "convergence_eps must be > 0");
  if (dwell < 1) throw Error(ErrorKind::InvalidArgument, "dwell must be >= 1");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Sample {
  double t;
  Vec<N> y;
};

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double h, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
  Vec<N> out = y;
  for (const auto& [c, k] : terms) {
    for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

template <std::size_t N>
bool finite(const Vec<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N, class F>
std::vector<Sample<N>> run_rk4(F&& f, Vec<N> y, const IntegratorConfig& cfg) {
  const auto steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  std::vector<Sample<N>> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, y});
  for (long n = 0; n < steps; ++n) {
    const double t = n * cfg.dt;
    const double h = std::min(cfg.dt, cfg.t_end - t);
    const Vec<N> k1 = f(y);
    const Vec<N> k2 = f(axpy<N>(y, 0.5 * h, {{1.0, &k1}}));
    const Vec<N> k3 = f(axpy<N>(y, 0.5 * h, {{1.0, &k2}}));
    const Vec<N> k4 = f(axpy<N>(y, h, {{1.0, &k3}}));
    y = axpy<N>(y, h / 6.0, {{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}});
    out.push_back({n + 1 == steps ? cfg.t_end : t + h, y});
    if (!finite(y)) break;
  }
  return out;
}

// Dormand-Prince 5(4) with local extrapolation.
template <std::size_t N, class F>
std::vector<Sample<N>> run_dopri(F&& f, Vec<N> y, const IntegratorConfig& cfg) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double h_max = cfg.t_end / (4.0 * cfg.dwell);
  const double h_min = 1e-12 * std::max(1.0, cfg.t_end);
  double h = std::min(cfg.dt, h_max);
  double t = 0.0;
  std::vector<Sample<N>> out;
  out.push_back({t, y});
  Vec<N> k1 = f(y);
  while (t < cfg.t_end) {
    const bool last = t + h >= cfg.t_end;
    if (last) h = cfg.t_end - t;
    const Vec<N> k2 = f(axpy<N>(y, h, {{a21, &k1}}));
    const Vec<N> k3 = f(axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec<N> k4 = f(axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec<N> k5 = f(axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec<N> k6 = f(axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec<N> yn = axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec<N> k7 = f(yn);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(yn[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    if (err <= 1.0) {
      t = last ? cfg.t_end : t + h;
      y = yn;
      k1 = k7;
      out.push_back({t, y});
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min(h * factor, h_max);
    if (t < cfg.t_end && h < h_min) {
      std::ostringstream os;
      os << "adaptive step fell below " << h_min << " at t = " << t;
      throw Error(ErrorKind::StepSizeUnderflow, os.str());
    }
  }
  return out;
}

template <std::size_t N, class F>
std::vector<Sample<N>> run(F&& f, const Vec<N>& y0, const IntegratorConfig& cfg) {
  cfg.validate();
  return cfg.scheme == OdeScheme::Rk4Fixed ? run_rk4<N>(f, y0, cfg) : run_dopri<N>(f, y0, cfg);
}

// First equilibrium that the trajectory stays within eps of for `dwell`
// consecutive samples.
std::optional<Equilibrium> detect(const std::vector<TrajectorySample>& samples, const EquilibriumSet& set,
                                  const IntegratorConfig& cfg) {
  std::optional<std::size_t> current;
  int count = 0;
  for (const auto& s : samples) {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < set.equilibria.size(); ++i) {
      if (std::abs(s.rho - set.equilibria[i].rho) < cfg.convergence_eps) hit = i;
    }
    if (hit && hit == current) {
      ++count;
    } else {
      current = hit;
      count = hit ? 1 : 0;
    }
    if (current && count >= cfg.dwell) return set.equilibria[*current];
  }
  return std::nullopt;
}

}  // namespace

Trajectory integrate_reduced(const ReducedCoeffs& rc, double rho_init, const IntegratorConfig& cfg) {
  if (!(rc.a3 > 0.0)) throw Error(ErrorKind::NonPositiveCubic, "reduced flow needs a3 > 0");
  const auto raw = run<1>([&rc](const Vec<1>& y) { return Vec<1>{rc.rhs(y[0])}; }, Vec<1>{rho_init}, cfg);
  Trajectory traj;
  for (const auto& s : raw) traj.samples.push_back({s.t, s.y[0], kNaN});
  traj.converged_to = detect(traj.samples, reduced_steady_states(rc), cfg);
  return traj;
}

Trajectory integrate_full(const ThermoState& state, const CoefficientModel& model, double rho_init,
                          const IntegratorConfig& cfg) {
  const auto cv = eval_coefficients(model, state);
  const SteadyCubic f = steady_cubic(state, cv);
  const auto raw = run<1>([&f](const Vec<1>& y) { return Vec<1>{f(y[0])}; }, Vec<1>{rho_init}, cfg);
  Trajectory traj;
  for (const auto& s : raw) traj.samples.push_back({s.t, s.y[0], kNaN});
  traj.converged_to = detect(traj.samples, full_steady_states(state, cv), cfg);
  return traj;
}

Trajectory integrate_coupled(const ThermoState& state, const CoefficientModel& model, double rho_init,
                             double S_init, const IntegratorConfig& cfg) {
  const auto cv = eval_coefficients(model, state);
  const auto raw = run<2>(
      [&](const Vec<2>& y) {
        const auto r = coupled_rhs(y[0], y[1], state, cv);
        return Vec<2>{r[0], r[1]};
      },
      Vec<2>{rho_init, S_init}, cfg);
  Trajectory traj;
  traj.coupled = true;
  for (const auto& s : raw) traj.samples.push_back({s.t, s.y[0], s.y[1]});
  traj.converged_to = detect(traj.samples, full_steady_states(state, cv), cfg);
  return traj;
}

EnergyFn reduced_energy(const ReducedCoeffs& rc) {
  return [rc](const TrajectorySample& s) { return rc.potential(s.rho); };
}

EnergyFn full_energy(const ThermoState& state, const CoefficientModel& model) {
  const auto cv = eval_coefficients(model, state);
  const double g_ref = model.g_ref;
  return [state, cv, g_ref](const TrajectorySample& s) { return gibbs_reduced(s.rho, state, cv, g_ref); };
}

EnergyFn coupled_energy(const ThermoState& state, const CoefficientModel& model) {
  const auto cv = eval_coefficients(model, state);
  const double g_ref = model.g_ref;
  return [state, cv, g_ref](const TrajectorySample& s) { return gibbs_homogeneous(s.rho, s.S, state, cv, g_ref); };
}

double lyapunov_audit(const Trajectory& traj, const EnergyFn& energy) {
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const double e0 = energy(traj.samples[i - 1]);
    const double e1 = energy(traj.samples[i]);
    const double inc = e1 - e0;
    if (!std::isfinite(inc)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, inc);
  }
  return worst;
}

std::vector<BasinLabel> basin_probe(const ReducedCoeffs& rc, const std::vector<double>& init_grid,
                                    const IntegratorConfig& cfg) {
  const auto set = reduced_steady_states(rc);
  std::vector<BasinLabel> out;
  out.reserve(init_grid.size());
  for (double init : init_grid) {
    BasinLabel label;
    label.init = init;
    for (const auto& e : set.equilibria) {
      if (!e.stable() && std::abs(init - e.rho) <= 1e-12) label.separatrix = true;
    }
    if (!label.separatrix) label.limit = integrate_reduced(rc, init, cfg).converged_to;
    out.push_back(label);
  }
  return out;
}

}  // namespace pvt
