#include "pvt/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "pvt/cubic.hpp"
#include "pvt/error.hpp"

namespace pvt {

std::string_view to_string(Branch branch) noexcept {
  switch (branch) {
    case Branch::Zero: return "zero";
    case Branch::Plus: return "plus";
    case Branch::Minus: return "minus";
    case Branch::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

int EquilibriumSet::stable_count() const noexcept {
  return static_cast<int>(std::count_if(equilibria.begin(), equilibria.end(),
                                        [](const Equilibrium& e) { return e.stable(); }));
}

std::optional<Equilibrium> EquilibriumSet::find(Branch branch) const {
  for (const auto& e : equilibria) {
    if (e.branch == branch) return e;
  }
  return std::nullopt;
}

namespace {

Equilibrium make_equilibrium(double rho, double fprime, Branch branch, int multiplicity) {
  Equilibrium e;
  e.rho = rho;
  e.fprime = fprime;
  e.stability = fprime < 0.0 ? Stability::Stable : Stability::Unstable;
  e.branch = branch;
  e.multiplicity = multiplicity;
  return e;
}

void sort_ascending(std::vector<Equilibrium>& v) {
  std::sort(v.begin(), v.end(), [](const Equilibrium& l, const Equilibrium& r) { return l.rho < r.rho; });
}

}  // namespace

EquilibriumSet reduced_steady_states(const ReducedCoeffs& rc, double tol) {
  if (!(rc.a3 > kMinCubic)) {
    throw Error(ErrorKind::NonPositiveCubic, "reduced flow needs a3 > 1e-12");
  }
  EquilibriumSet set;
  set.discriminant = rc.discriminant();
  const double disc = set.discriminant;

  int zero_mult = 1;
  std::vector<Equilibrium> nonzero;
  auto add = [&](double rho, Branch branch, int mult) {
    if (std::abs(rho) <= tol) {
      zero_mult += mult;
    } else {
      nonzero.push_back(make_equilibrium(rho, rc.fprime(rho), branch, mult));
    }
  };

  if (disc > tol * tol) {
    const double sq = std::sqrt(disc);
    // One root from the cancellation-free sum, the other from the product
    // rho_plus * rho_minus = -lambda / a3.
    double plus, minus;
    if (rc.a2 >= 0.0) {
      plus = (rc.a2 + sq) / (2.0 * rc.a3);
      minus = -rc.lambda / (rc.a3 * plus);
    } else {
      minus = (rc.a2 - sq) / (2.0 * rc.a3);
      plus = -rc.lambda / (rc.a3 * minus);
    }
    add(plus, Branch::Plus, 1);
    add(minus, Branch::Minus, 1);
  } else if (std::abs(disc) <= tol * tol) {
    add(rc.a2 / (2.0 * rc.a3), Branch::Plus, 2);
  }

  set.equilibria = std::move(nonzero);
  set.equilibria.push_back(make_equilibrium(0.0, rc.lambda, Branch::Zero, zero_mult));
  sort_ascending(set.equilibria);
  return set;
}

EquilibriumSet full_steady_states(const ThermoState& state, const CoefficientValues& cv, double tol) {
  if (!(cv.cubic() > kMinCubic)) {
    throw Error(ErrorKind::NonPositiveCubic, "steady-state cubic needs a3 > 1e-12");
  }
  const SteadyCubic f = steady_cubic(state, cv);
  const CubicRoots roots = solve_cubic(f, tol);
  EquilibriumSet set;
  set.discriminant = roots.discriminant;
  for (const auto& r : roots.roots) {
    set.equilibria.push_back(make_equilibrium(r.value, f.derivative(r.value), Branch::Unlabeled, r.multiplicity));
  }
  return set;
}

EquilibriumSet full_steady_states(const ThermoState& state, const CoefficientModel& model, double tol) {
  return full_steady_states(state, eval_coefficients(model, state), tol);
}

Matrix2 coupled_jacobian(double rho, double S, const ThermoState& s, const CoefficientModel& model) {
  const auto cv = eval_coefficients(model, s);
  Matrix2 J{};
  J[0][0] = -(cv.alpha1 + cv.b * s.p) + 2.0 * cv.alpha2 * rho - 3.0 * cv.alpha3 * rho * rho - 2.0 * cv.beta2 * S;
  J[0][1] = -2.0 * cv.beta2 * rho;
  J[1][0] = -2.0 * cv.beta2 * rho;
  J[1][1] = -cv.beta1;
  return J;
}

JacobianEigs coupled_jacobian_eigs(double rho, double S, const ThermoState& state, const CoefficientModel& model) {
  const Matrix2 J = coupled_jacobian(rho, S, state, model);
  JacobianEigs out;
  out.trace = J[0][0] + J[1][1];
  out.det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  const double half = 0.5 * out.trace;
  // Discriminant written as ((a - d)/2)^2 + bc to avoid cancellation.
  const double hd = 0.5 * (J[0][0] - J[1][1]);
  const double disc = hd * hd + J[0][1] * J[1][0];
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    out.first = {half - sq, 0.0};
    out.second = {half + sq, 0.0};
  } else {
    const double sq = std::sqrt(-disc);
    out.first = {half, -sq};
    out.second = {half, sq};
  }
  return out;
}

double gas_branch_select(const EquilibriumSet& set) {
  std::optional<double> smallest_stable;
  for (const auto& e : set.equilibria) {
    if (!e.stable()) continue;
    if (e.rho >= 0.0) return e.rho;
    if (!smallest_stable) smallest_stable = e.rho;
  }
  if (smallest_stable) return *smallest_stable;
  throw Error(ErrorKind::NoStableRoot, "equilibrium set has no stable root");
}

}  // namespace pvt
