#include <algorithm>
#include <cmath>
#include <limits>

#include "pvt/error.hpp"
#include "pvt/numeric.hpp"
#include "pvt/transition.hpp"

namespace pvt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// rho_plus, rho_minus of the reduced flow; a slightly negative discriminant
// (round-off at the fold) is clamped to zero.
std::optional<std::pair<double, double>> pm_offsets(const ReducedCoeffs& rc) {
  double disc = rc.discriminant();
  const double scale = rc.a2 * rc.a2 + std::abs(4.0 * rc.a3 * rc.lambda);
  if (disc < -1e-12 * std::max(scale, 1e-300)) return std::nullopt;
  disc = std::max(disc, 0.0);
  const double sq = std::sqrt(disc);
  double plus, minus;
  if (rc.a2 >= 0.0) {
    plus = (rc.a2 + sq) / (2.0 * rc.a3);
    minus = plus != 0.0 ? -rc.lambda / (rc.a3 * plus) : 0.0;
  } else {
    minus = (rc.a2 - sq) / (2.0 * rc.a3);
    plus = -rc.lambda / (rc.a3 * minus);
  }
  return std::make_pair(plus, minus);
}

std::optional<double> extreme_stable_root(const CoefficientModel& model, const ThermoState& state, bool largest) {
  EquilibriumSet set;
  try {
    set = full_steady_states(state, model);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::optional<double> out;
  for (const auto& e : set.equilibria) {
    if (!e.stable()) continue;
    if (!out || (largest ? e.rho > *out : e.rho < *out)) out = e.rho;
  }
  return out;
}

double value_or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

// G along the steady state nearest `seed`, re-solved at each state.
double branch_gibbs(const CoefficientModel& model, double seed, const ThermoState& state) {
  const auto set = full_steady_states(state, model);
  double best = set.equilibria.front().rho;
  for (const auto& e : set.equilibria) {
    if (std::abs(e.rho - seed) < std::abs(best - seed)) best = e.rho;
  }
  return gibbs_reduced(best, state, model);
}

}  // namespace

// --- transition functions -------------------------------------------------------

TransitionFunctions::TransitionFunctions(const CoefficientModel& model, double p, const SweepWindow& window)
    : model_(model),
      p_(p),
      branch_(model, StateLine{SweepAxis::Temperature, p}, window.T_max, window.T_min, window.steps) {
  const auto ev = branch_.critical();
  if (!ev) throw Error(ErrorKind::NoSignChange, "lambda does not vanish on the reference branch in the window");
  T0_ = ev->s;
  rho0_c_ = ev->rho0;
  a2_c_ = ev->rc.a2;
  if (std::abs(a2_c_) <= kA2Tol) {
    T_star_ = T0_;
    return;
  }
  T1_ = branch_.fold_after(T0_);
  const Branch jumping = a2_c_ > 0.0 ? Branch::Plus : Branch::Minus;
  auto gap = [&](double T) {
    const auto shifted_rho = shifted(T, jumping);
    const auto ref = rho0(T);
    if (!shifted_rho || !ref) return kNaN;
    return gibbs(*shifted_rho, T) - gibbs(*ref, T);
  };
  const double hi = T1_ ? *T1_ : window.T_max;
  T_star_ = numeric::bisect(gap, T0_, hi, 1e-15);
}

double TransitionFunctions::gibbs(double rho, double T) const { return gibbs_reduced(rho, {T, p_}, model_); }

std::optional<double> TransitionFunctions::shifted(double T, Branch which) const {
  const auto rc = branch_.reduced(T);
  if (!rc) return std::nullopt;
  const auto off = pm_offsets(*rc);
  if (!off) return std::nullopt;
  return rc->rho0 + (which == Branch::Minus ? off->second : off->first);
}

std::optional<double> TransitionFunctions::phi_plus(double T) const {
  const bool jumped = a2_c_ > kA2Tol ? (T_star_ && T < *T_star_) : T < T0_;
  if (!jumped) return rho0(T);
  if (auto r = shifted(T, Branch::Plus)) return r;
  return extreme_stable_root(model_, {T, p_}, true);
}

std::optional<double> TransitionFunctions::phi_minus(double T) const {
  const bool jumped = a2_c_ < -kA2Tol ? (T_star_ && T < *T_star_) : T < T0_;
  if (!jumped) return rho0(T);
  if (auto r = shifted(T, Branch::Minus)) return r;
  if (a2_c_ < -kA2Tol) return extreme_stable_root(model_, {T, p_}, false);
  return std::nullopt;
}

std::pair<TransitionFunctionTable, TransitionFunctionTable> TransitionFunctions::tables(double T_min, double T_max,
                                                                                        int count) const {
  TransitionFunctionTable plus, minus;
  plus.branch = Branch::Plus;
  minus.branch = Branch::Minus;
  plus.T0 = minus.T0 = T0_;
  plus.T1 = minus.T1 = T1_;
  if (a2_c_ > kA2Tol) {
    plus.T_star = T_star_;
  } else if (a2_c_ < -kA2Tol) {
    minus.T_star = T_star_;
  }
  for (int i = 0; i < count; ++i) {
    const double T = count == 1 ? T_min : T_min + (T_max - T_min) * i / (count - 1);
    plus.samples.emplace_back(T, value_or_nan(phi_plus(T)));
    minus.samples.emplace_back(T, value_or_nan(phi_minus(T)));
  }
  return {std::move(plus), std::move(minus)};
}

std::vector<TransitionRow> TransitionFunctions::rows(double T_min, double T_max, int count) const {
  std::vector<TransitionRow> out;
  for (int i = 0; i < count; ++i) {
    const double T = count == 1 ? T_min : T_min + (T_max - T_min) * i / (count - 1);
    TransitionRow row;
    row.T = T;
    row.phi_plus = value_or_nan(phi_plus(T));
    row.phi_minus = value_or_nan(phi_minus(T));
    row.G_plus = std::isnan(row.phi_plus) ? kNaN : gibbs(row.phi_plus, T);
    const auto ref = rho0(T);
    row.G_zero = ref ? gibbs(*ref, T) : kNaN;
    out.push_back(row);
  }
  return out;
}

std::pair<TransitionFunctionTable, TransitionFunctionTable> transition_functions(const CoefficientModel& model,
                                                                                 double p, const SweepWindow& window,
                                                                                 int count) {
  return TransitionFunctions(model, p, window).tables(window.T_min, window.T_max, count);
}

// --- free energies ---------------------------------------------------------------

EquilibriumEnergies free_energy_at_equilibria(const ReducedCoeffs& rc, double G_at_rho0) {
  const auto off = pm_offsets(rc);
  if (!off) throw Error(ErrorKind::BranchMissing, "plus/minus branches need a2^2 + 4 a3 lambda >= 0");
  auto gap = [&](double r) { return G_at_rho0 - 0.25 * rc.lambda * r * r - rc.a2 * r * r * r / 12.0; };
  return EquilibriumEnergies{gap(off->first), gap(off->second), G_at_rho0};
}

ThermoSignature thermo_signature(const CoefficientModel& model, double p, const SweepWindow& window) {
  const TransitionFunctions tf(model, p, window);
  if (!(tf.a2_at_T0() > kA2Tol)) throw Error(ErrorKind::NotFirstOrder, "a2 <= 0 at the critical temperature");
  if (!tf.T_star()) throw Error(ErrorKind::NotFirstOrder, "no free-energy exchange between T0 and T1");
  ThermoSignature sig;
  sig.p = p;
  sig.T0 = tf.T0();
  sig.T_star = *tf.T_star();
  sig.T1 = tf.T1() ? *tf.T1() : kNaN;

  const auto liquid0 = tf.shifted(sig.T0, Branch::Plus);
  const auto gas0 = tf.rho0(sig.T0);
  const auto liquid = tf.shifted(sig.T_star, Branch::Plus);
  const auto gas = tf.rho0(sig.T_star);
  if (!liquid0 || !gas0 || !liquid || !gas) throw Error(ErrorKind::BranchMissing, "phase branch missing");
  sig.rho_gas = *gas;
  sig.rho_liquid = *liquid;
  sig.deltaE = tf.gibbs(*liquid0, sig.T0) - tf.gibbs(*gas0, sig.T0);
  sig.deltaE_at_star = tf.gibbs(*liquid, sig.T_star) - tf.gibbs(*gas, sig.T_star);

  const double T = sig.T_star;
  auto along_T = [&](double seed) {
    return [&model, seed, p](double t) { return branch_gibbs(model, seed, {t, p}); };
  };
  auto along_p = [&](double seed) {
    return [&model, seed, T](double q) { return branch_gibbs(model, seed, {T, q}); };
  };
  const double hT = 1e-4 * std::abs(T);
  const double hp = 1e-4 * std::abs(p);
  const double S_liq = -numeric::derivative(along_T(*liquid), T, hT);
  const double S_gas = -numeric::derivative(along_T(*gas), T, hT);
  const double V_liq = numeric::derivative(along_p(*liquid), p, hp);
  const double V_gas = numeric::derivative(along_p(*gas), p, hp);
  sig.deltaS = S_liq - S_gas;
  sig.deltaV = V_liq - V_gas;
  sig.deltaH = T * sig.deltaS;
  const double hC = 1e-3 * std::abs(T);
  sig.deltaC = -T * (numeric::second_derivative(along_T(*liquid), T, hC) -
                     numeric::second_derivative(along_T(*gas), T, hC));
  return sig;
}

double heat_capacity_jump(const LandauLocal& landau, double a2_tol) {
  if (std::abs(landau.a2) > a2_tol) throw Error(ErrorKind::NotSecondOrder, "a2 != 0: not a second-order point");
  if (!(landau.a3 > 0.0)) throw Error(ErrorKind::NonPositiveCubic, "heat-capacity jump needs a3 > 0");
  return landau.alpha_slope * landau.alpha_slope * landau.T_C / (2.0 * landau.a3);
}

DerivativeJump derivative_jump(const std::function<double(double)>& g, double x0, int order, double delta) {
  if (order < 0 || order > 3 || !(delta > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "derivative_jump supports orders 0..3 and delta > 0");
  }
  auto third = [&](double x, double h) {
    return (g(x + 2.0 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) - g(x - 2.0 * h)) / (2.0 * h * h * h);
  };
  auto at = [&](double x, double off) {
    const double h = 0.25 * off;
    switch (order) {
      case 0: return g(x);
      case 1: return numeric::derivative(g, x, h);
      case 2: return numeric::second_derivative(g, x, h);
      default: return (4.0 * third(x, 0.5 * h) - third(x, h)) / 3.0;
    }
  };
  auto limit = [&](double side) {
    return 3.0 * at(x0 + side * delta, delta) - 3.0 * at(x0 + side * 2.0 * delta, delta) +
           at(x0 + side * 3.0 * delta, delta);
  };
  return DerivativeJump{limit(-1.0), limit(1.0)};
}

double numeric_heat_capacity_jump(const TransitionFunctions& tf, double delta) {
  auto g = [&tf](double T) {
    const auto phi = tf.phi_plus(T);
    return phi ? tf.gibbs(*phi, T) : kNaN;
  };
  return -tf.T0() * derivative_jump(g, tf.T0(), 2, delta).jump();
}

// --- coexistence ------------------------------------------------------------------

CoexistenceCurve coexistence_trace(const CoefficientModel& model, double p_min, double p_max, int count,
                                   const SweepWindow& window) {
  if (count < 1 || !(p_min <= p_max) || (count > 1 && p_min == p_max)) {
    throw Error(ErrorKind::InvalidArgument, "coexistence trace needs p_min < p_max and at least one sample");
  }
  CoexistenceCurve curve;
  for (int i = 0; i < count; ++i) {
    const double p = count == 1 ? p_min : p_min + (p_max - p_min) * i / (count - 1);
    try {
      const ThermoSignature sig = thermo_signature(model, p, window);
      const double hp = 1e-4 * p;
      const double T_hi = thermo_signature(model, p + hp, window).T_star;
      const double T_lo = thermo_signature(model, p - hp, window).T_star;
      CoexistenceSample s;
      s.p = p;
      s.T_star = sig.T_star;
      s.rho_gas = sig.rho_gas;
      s.rho_liquid = sig.rho_liquid;
      s.deltaS = sig.deltaS;
      s.deltaV = sig.deltaV;
      s.deltaH = sig.deltaH;
      s.dpdT_curve = 2.0 * hp / (T_hi - T_lo);
      s.dpdT_clapeyron = sig.deltaH / (sig.T_star * sig.deltaV);
      curve.samples.push_back(s);
    } catch (const Error&) {
      curve.skipped.push_back(p);
    }
  }
  return curve;
}

MetastableWindow metastable_window(const CoefficientModel& model, double p, const SweepWindow& window, int count) {
  const TransitionFunctions tf(model, p, window);
  if (!(tf.a2_at_T0() > kA2Tol)) throw Error(ErrorKind::NotFirstOrder, "bistability window needs a2 > 0");
  if (!tf.T1()) throw Error(ErrorKind::NoFoldInWindow, "no saddle-node above the critical temperature");
  MetastableWindow out;
  out.T0 = tf.T0();
  out.T1 = *tf.T1();
  for (int i = 0; i < count; ++i) {
    const double T = out.T0 + (out.T1 - out.T0) * (i + 0.5) / count;
    WindowSample s;
    s.T = T;
    s.rho_gas = value_or_nan(tf.rho0(T));
    s.rho_separatrix = value_or_nan(tf.shifted(T, Branch::Minus));
    s.rho_liquid = value_or_nan(tf.shifted(T, Branch::Plus));
    s.gas_basin = std::abs(s.rho_separatrix - s.rho_gas);
    s.liquid_basin = std::abs(s.rho_liquid - s.rho_separatrix);
    s.stable_count = full_steady_states({T, p}, model).stable_count();
    out.samples.push_back(s);
  }
  return out;
}

std::vector<BifurcationRow> bifurcation_diagram(const CoefficientModel& model, double p, const SweepWindow& window,
                                                int count) {
  if (count < 2 || !(window.T_min < window.T_max)) {
    throw Error(ErrorKind::InvalidArgument, "bifurcation diagram needs a nonempty window and >= 2 samples");
  }
  const TransitionFunctions tf(model, p, window);
  std::vector<BifurcationRow> rows;
  for (int i = 0; i < count; ++i) {
    const double T = window.T_min + (window.T_max - window.T_min) * i / (count - 1);
    if (const auto rc = tf.branch().reduced(T)) {
      for (const auto& e : reduced_steady_states(*rc).equilibria) {
        rows.push_back({T, rc->lambda, rc->rho0 + e.rho, e.branch, e.stable(), ""});
      }
    } else {
      for (const auto& e : full_steady_states({T, p}, model).equilibria) {
        rows.push_back({T, kNaN, e.rho, Branch::Unlabeled, e.stable(), ""});
      }
    }
  }
  rows.push_back({tf.T0(), 0.0, tf.rho0_at_T0(), Branch::Zero, false, "critical"});
  if (tf.T1()) {
    if (const auto rc = tf.branch().reduced(*tf.T1())) {
      rows.push_back({*tf.T1(), rc->lambda, rc->rho0 + rc->a2 / (2.0 * rc->a3), Branch::Plus, false, "fold"});
    }
  }
  return rows;
}

}  // namespace pvt
