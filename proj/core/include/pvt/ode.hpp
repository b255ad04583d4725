#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pvt/equilibria.hpp"
#include "pvt/model.hpp"

namespace pvt {

enum class OdeScheme { Rk4Fixed, Rk45Adaptive };

std::string_view to_string(OdeScheme scheme) noexcept;
OdeScheme ode_scheme_from_string(std::string_view name);

struct IntegratorConfig {
  OdeScheme scheme = OdeScheme::Rk45Adaptive;
  double dt = 1e-2;  ///< fixed step, or the first trial step of the adaptive scheme
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double t_end = 10.0;
  double convergence_eps = 1e-8;
  int dwell = 50;  ///< consecutive accepted steps inside convergence_eps

  /// Throws InvalidArgument.
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  double rho = 0.0;
  double S = 0.0;  ///< NaN for scalar trajectories
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool coupled = false;
  std::optional<Equilibrium> converged_to;

  const TrajectorySample& terminal() const { return samples.back(); }
};

/// d rho/dt = lambda rho + a2 rho^2 - a3 rho^3. Throws NonPositiveCubic,
/// StepSizeUnderflow (adaptive scheme only).
Trajectory integrate_reduced(const ReducedCoeffs& rc, double rho_init, const IntegratorConfig& cfg);

/// Entropy-eliminated scalar flow at a fixed state.
Trajectory integrate_full(const ThermoState& state, const CoefficientModel& model, double rho_init,
                          const IntegratorConfig& cfg);

/// Coupled (rho, S) flow at a fixed state.
Trajectory integrate_coupled(const ThermoState& state, const CoefficientModel& model, double rho_init,
                             double S_init, const IntegratorConfig& cfg);

using EnergyFn = std::function<double(const TrajectorySample&)>;

EnergyFn reduced_energy(const ReducedCoeffs& rc);
EnergyFn full_energy(const ThermoState& state, const CoefficientModel& model);
EnergyFn coupled_energy(const ThermoState& state, const CoefficientModel& model);

/// Largest energy increase between consecutive samples, floored at 0.
/// Non-finite energies count as an infinite increase.
double lyapunov_audit(const Trajectory& traj, const EnergyFn& energy);

struct BasinLabel {
  double init = 0.0;
  std::optional<Equilibrium> limit;  ///< nullopt when unresolved
  bool separatrix = false;           ///< init within 1e-12 of an unstable equilibrium
};

std::vector<BasinLabel> basin_probe(const ReducedCoeffs& rc, const std::vector<double>& init_grid,
                                    const IntegratorConfig& cfg);

}  // namespace pvt
