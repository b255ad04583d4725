#include "pvt/transition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "pvt/error.hpp"
#include "pvt/numeric.hpp"

namespace pvt {

std::string_view to_string(DynamicType type) noexcept {
  switch (type) {
    case DynamicType::I: return "I";
    case DynamicType::II: return "II";
    case DynamicType::III: return "III";
  }
  return "I";
}

std::string_view to_string(ThermoOrder order) noexcept {
  switch (order) {
    case ThermoOrder::First: return "first";
    case ThermoOrder::Second: return "second";
    case ThermoOrder::Third: return "third";
  }
  return "second";
}

namespace {

void require_critical(const ReducedCoeffs& rc, double tol) {
  if (!(std::abs(rc.lambda) <= tol)) {
    std::ostringstream os;
    os << "lambda = " << rc.lambda << " exceeds the critical tolerance " << tol;
    throw Error(ErrorKind::NotCritical, os.str());
  }
  if (!(rc.a3 > 0.0)) throw Error(ErrorKind::NonPositiveCubic, "classification needs a3 > 0");
}

double nearest_root(const CoefficientModel& model, const ThermoState& state, double guess) {
  const auto set = full_steady_states(state, model);
  double best = set.equilibria.front().rho;
  for (const auto& e : set.equilibria) {
    if (std::abs(e.rho - guess) < std::abs(best - guess)) best = e.rho;
  }
  return best;
}

}  // namespace

TransitionReport classify_local(const ReducedCoeffs& rc, double tol, double a2_tol) {
  require_critical(rc, tol);
  TransitionReport rep;
  rep.reduced = rc;
  rep.rho0 = rc.rho0;
  if (std::abs(rc.a2) <= a2_tol) {
    rep.leading_order = 3;
    rep.leading_coeff = -rc.a3;
    rep.dynamic_type = DynamicType::I;
  } else {
    rep.leading_order = 2;
    rep.leading_coeff = rc.a2;
    rep.dynamic_type = DynamicType::III;
  }
  rep.thermo_order = transition_order(rc, tol, a2_tol);
  return rep;
}

ThermoOrder transition_order(const ReducedCoeffs& rc, double tol, double a2_tol) {
  require_critical(rc, tol);
  if (rc.a2 > a2_tol) return ThermoOrder::First;
  if (rc.a2 < -a2_tol) return ThermoOrder::Third;
  return ThermoOrder::Second;
}

double critical_reference_root(const CoefficientModel& model, const ThermoState& state) {
  const auto set = full_steady_states(state, model);
  const auto it = std::min_element(set.equilibria.begin(), set.equilibria.end(),
                                   [](const Equilibrium& a, const Equilibrium& b) {
                                     return std::abs(a.fprime) < std::abs(b.fprime);
                                   });
  return it->rho;
}

ThermoOrder transition_order(const CoefficientModel& model, const ThermoState& state, std::optional<double> rho0) {
  const double rho = rho0 ? nearest_root(model, state, *rho0) : critical_reference_root(model, state);
  return transition_order(reduced_coefficients(rho, state, model));
}

TransitionReport classify(const CoefficientModel& model, const ThermoState& state, std::optional<double> rho0) {
  const double rho = rho0 ? nearest_root(model, state, *rho0) : critical_reference_root(model, state);
  TransitionReport rep = classify_local(reduced_coefficients(rho, state, model));
  rep.critical_state = state;
  rep.rho0 = rho;
  if (rep.dynamic_type == DynamicType::I) {
    rep.notes = "continuous transition; rho0 +- sqrt(lambda/a3) bifurcate on the lambda > 0 side";
    return rep;
  }
  // Fold on whichever side of T the reference root stays stable.
  const double width = std::max(0.5 * state.T, 1e-3);
  for (double sign : {1.0, -1.0}) {
    const double end = std::clamp(state.T + sign * width, model.box.T_min, model.box.T_max);
    if (std::abs(end - state.T) < 1e-12) continue;
    try {
      ReferenceBranch br(model, StateLine{SweepAxis::Temperature, state.p}, state.T, end, 400, rho);
      const auto T1 = br.first_discriminant_change();
      if (!T1) continue;
      const auto rc = br.reduced(*T1);
      if (!rc) continue;
      const double offset = rc->a2 / (2.0 * rc->a3);
      rep.saddle_node = SaddleNode{*T1, state.p, offset, rc->rho0 + offset};
      break;
    } catch (const Error&) {
    }
  }
  rep.notes = rep.thermo_order == ThermoOrder::First ? "mixed transition; the plus branch jumps at T*"
                                                     : "mixed transition; the plus branch is continuous";
  if (!rep.saddle_node) rep.notes += "; no saddle-node found near the critical temperature";
  return rep;
}

// --- critical curve -----------------------------------------------------------

CriticalCurve critical_curve_trace(const CoefficientModel& model, double p_min, double p_max, int count,
                                   const SweepWindow& window, double delta) {
  if (count < 1 || !(p_min <= p_max) || (count > 1 && p_min == p_max)) {
    throw Error(ErrorKind::InvalidArgument, "critical curve needs p_min < p_max and at least one sample");
  }
  if (!(window.T_min < window.T_max)) throw Error(ErrorKind::InvalidArgument, "empty temperature window");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CriticalCurve curve;
  for (int i = 0; i < count; ++i) {
    const double p = count == 1 ? p_min : p_min + (p_max - p_min) * i / (count - 1);
    try {
      ReferenceBranch br(model, StateLine{SweepAxis::Temperature, p}, window.T_max, window.T_min, window.steps);
      const auto ev = br.critical();
      if (!ev) {
        curve.skipped.push_back(p);
        continue;
      }
      CriticalSample s;
      s.p = p;
      s.T = ev->s;
      s.rho0 = ev->rho0;
      s.a2 = ev->rc.a2;
      s.kind = ev->kind;
      const auto above = br.reduced(ev->s + delta);
      const auto below = br.reduced(ev->s - delta);
      s.lambda_above = above ? above->lambda : nan;
      s.lambda_below = below ? below->lambda : nan;
      curve.samples.push_back(s);
    } catch (const Error&) {
      curve.skipped.push_back(p);
    }
  }
  if (curve.samples.size() >= 2) {
    bool up = true, down = true;
    for (std::size_t k = 1; k < curve.samples.size(); ++k) {
      const double d = curve.samples[k].T - curve.samples[k - 1].T;
      if (!(d > 1e-12)) up = false;
      if (!(d < -1e-12)) down = false;
    }
    curve.monotone = up || down;
    curve.slope_sign = up ? 1 : (down ? -1 : 0);
  }
  return curve;
}

// --- Andrews point ------------------------------------------------------------

namespace {

using Vec3 = std::array<double, 3>;

bool andrews_residual(const CoefficientModel& model, const Vec3& x, Vec3& F) {
  try {
    const ThermoState state{x[1], x[2]};
    const auto cv = eval_coefficients(model, state);
    const auto rc = reduced_coefficients(x[0], state, cv);
    F = {steady_cubic(state, cv)(x[0]), rc.lambda, rc.a2};
    return std::isfinite(F[0]) && std::isfinite(F[1]) && std::isfinite(F[2]);
  } catch (const Error&) {
    return false;
  }
}

double max_norm(const Vec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

// Gaussian elimination with partial pivoting; false when a pivot vanishes.
bool solve3(std::array<Vec3, 3> A, Vec3 b, Vec3& x) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    if (A[piv][c] == 0.0 || !std::isfinite(A[piv][c])) return false;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < 3; ++r) {
      const double m = A[r][c] / A[c][c];
      for (int k = c; k < 3; ++k) A[r][k] -= m * A[c][k];
      b[r] -= m * b[c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = b[r];
    for (int k = r + 1; k < 3; ++k) acc -= A[r][k] * x[k];
    x[r] = acc / A[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

}  // namespace

AndrewsPoint andrews_point(const CoefficientModel& model, const AndrewsGuess& guess, int max_iter) {
  if (!model.box.contains({guess.T, guess.p})) {
    throw Error(ErrorKind::OutOfValidityBox, "Andrews guess lies outside the validity box");
  }
  Vec3 x{guess.rho, guess.T, guess.p};
  Vec3 F{};
  if (!andrews_residual(model, x, F)) {
    throw Error(ErrorKind::NoConvergence, "residual undefined at the initial guess");
  }
  int it = 0;
  for (; it < max_iter && max_norm(F) > 0.0; ++it) {
    const ThermoState state{x[1], x[2]};
    const auto rc = reduced_coefficients(x[0], state, model);
    std::array<Vec3, 3> J{};
    J[0][0] = rc.lambda;
    J[1][0] = 2.0 * rc.a2;
    J[2][0] = -3.0 * rc.a3;
    for (int col = 1; col < 3; ++col) {
      const double h = 1e-5 * std::max(std::abs(x[col]), 1e-3);
      Vec3 xp = x, xm = x, Fp{}, Fm{};
      xp[col] += h;
      xm[col] -= h;
      if (!andrews_residual(model, xp, Fp) || !andrews_residual(model, xm, Fm)) {
        throw Error(ErrorKind::NoConvergence, "Newton iterate reached the edge of the validity box");
      }
      for (int r = 0; r < 3; ++r) J[r][col] = (Fp[r] - Fm[r]) / (2.0 * h);
    }
    Vec3 dx{};
    if (!solve3(J, F, dx)) throw Error(ErrorKind::SingularJacobian, "Andrews Jacobian is singular");

    double step = 1.0;
    bool accepted = false;
    for (int halve = 0; halve < 20; ++halve, step *= 0.5) {
      const Vec3 xn{x[0] - step * dx[0], x[1] - step * dx[1], x[2] - step * dx[2]};
      Vec3 Fn{};
      if (andrews_residual(model, xn, Fn) && max_norm(Fn) < max_norm(F)) {
        x = xn;
        F = Fn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(max_norm(F) < 1e-9)) {
    std::ostringstream os;
    os << "Andrews system residual " << max_norm(F) << " after " << it << " iterations";
    throw Error(ErrorKind::NoConvergence, os.str());
  }
  return AndrewsPoint{x[1], x[2], x[0], max_norm(F), it};
}

// --- saddle-node --------------------------------------------------------------

namespace {

SaddleNode fold_state(const ReferenceBranch& br, double s) {
  const auto rc = br.reduced(s);
  if (!rc) throw Error(ErrorKind::NoFoldInWindow, "reference root lost at the fold");
  const double offset = rc->a2 / (2.0 * rc->a3);
  const ThermoState st = br.line().at(s);
  return SaddleNode{st.T, st.p, offset, rc->rho0 + offset};
}

}  // namespace

SaddleNode saddle_node_locate(const CoefficientModel& model, double p, const SweepWindow& window) {
  ReferenceBranch br(model, StateLine{SweepAxis::Temperature, p}, window.T_max, window.T_min, window.steps);
  const auto ev = br.critical();
  if (!ev) throw Error(ErrorKind::NoFoldInWindow, "no critical temperature in the window");
  if (std::abs(ev->rc.a2) <= kA2Tol) throw Error(ErrorKind::NoFoldInWindow, "a2 = 0 at the critical point");
  const auto T1 = br.fold_after(ev->s);
  if (!T1) throw Error(ErrorKind::NoFoldInWindow, "discriminant keeps its sign above the critical temperature");
  return fold_state(br, *T1);
}

SaddleNode saddle_node_locate_pressure(const CoefficientModel& model, double T, double p_min, double p_max,
                                       int steps) {
  ReferenceBranch br(model, StateLine{SweepAxis::Pressure, T}, p_min, p_max, steps);
  const auto p1 = br.first_discriminant_change();
  if (!p1) throw Error(ErrorKind::NoFoldInWindow, "discriminant keeps its sign along the pressure window");
  const SaddleNode sn = fold_state(br, *p1);
  if (std::abs(2.0 * sn.rho_offset) <= kA2Tol) throw Error(ErrorKind::NoFoldInWindow, "a2 = 0 at the fold");
  return sn;
}

PathFold saddle_node_locate(const ReducedPath& path, double s_lo, double s_hi, int steps, double a2_tol) {
  if (steps < 1 || !(s_lo < s_hi)) throw Error(ErrorKind::InvalidArgument, "empty fold window");
  auto disc = [&](double s) { return path(s).discriminant(); };
  double prev = disc(s_lo);
  for (int k = 1; k <= steps; ++k) {
    const double a = s_lo + (s_hi - s_lo) * (k - 1) / steps;
    const double b = s_lo + (s_hi - s_lo) * k / steps;
    const double cur = disc(b);
    if ((prev > 0.0) != (cur > 0.0) || cur == 0.0) {
      const auto s = numeric::bisect(disc, a, b, 1e-15);
      if (s) {
        const auto rc = path(*s);
        if (std::abs(rc.a2) <= a2_tol) throw Error(ErrorKind::NoFoldInWindow, "a2 = 0: pitchfork, not a fold");
        return PathFold{*s, rc.a2 / (2.0 * rc.a3)};
      }
    }
    prev = cur;
  }
  throw Error(ErrorKind::NoFoldInWindow, "discriminant keeps its sign on the window");
}

}  // namespace pvt
