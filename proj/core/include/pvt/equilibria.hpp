#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "pvt/model.hpp"

namespace pvt {

inline constexpr double kRootTol = 1e-10;
inline constexpr double kMinCubic = 1e-12;

enum class Stability { Stable, Unstable };
enum class Branch { Zero, Plus, Minus, Unlabeled };

std::string_view to_string(Branch branch) noexcept;

struct Equilibrium {
  double rho = 0.0;
  Stability stability = Stability::Unstable;
  Branch branch = Branch::Unlabeled;
  double fprime = 0.0;  ///< derivative of the scalar vector field at rho
  int multiplicity = 1;

  bool stable() const noexcept { return stability == Stability::Stable; }
};

struct EquilibriumSet {
  std::vector<Equilibrium> equilibria;  ///< strictly ascending in rho
  /// a2^2 + 4 a3 lambda for the shifted flow; the classical cubic
  /// discriminant for the unshifted one.
  double discriminant = 0.0;

  std::size_t size() const noexcept { return equilibria.size(); }
  bool empty() const noexcept { return equilibria.empty(); }
  int stable_count() const noexcept;
  std::optional<Equilibrium> find(Branch branch) const;
};

/// Steady states of d rho/dt = lambda rho + a2 rho^2 - a3 rho^3: the zero root
/// plus rho_pm = (a2 +- sqrt(a2^2 + 4 a3 lambda)) / (2 a3) when they are real.
/// |discriminant| <= tol^2 is treated as a double root.
EquilibriumSet reduced_steady_states(const ReducedCoeffs& rc, double tol = kRootTol);

/// All real roots of the entropy-eliminated steady-state cubic at `state`.
EquilibriumSet full_steady_states(const ThermoState& state, const CoefficientModel& model,
                                  double tol = kRootTol);
EquilibriumSet full_steady_states(const ThermoState& state, const CoefficientValues& cv,
                                  double tol = kRootTol);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Jacobian of the coupled (rho, S) flow.
Matrix2 coupled_jacobian(double rho, double S, const ThermoState& state, const CoefficientModel& model);

struct JacobianEigs {
  std::complex<double> first;
  std::complex<double> second;
  double trace = 0.0;
  double det = 0.0;
};

JacobianEigs coupled_jacobian_eigs(double rho, double S, const ThermoState& state,
                                   const CoefficientModel& model);

/// Smallest stable nonnegative root (the low-density branch); the smallest
/// stable root when none is nonnegative. Throws NoStableRoot.
double gas_branch_select(const EquilibriumSet& set);

}  // namespace pvt
