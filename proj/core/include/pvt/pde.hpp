#pragma once

#include <string_view>
#include <vector>

#include "pvt/model.hpp"

namespace pvt {

/// Density and entropy on a uniform vertex grid over [0, (n-1) h].
struct Field1D {
  int n = 3;
  double h = 1.0;
  std::vector<double> rho;
  std::vector<double> S;

  double domain_length() const noexcept { return (n - 1) * h; }
  double x(int i) const noexcept { return i * h; }

  static Field1D uniform(int n, double h, double rho, double S);
  /// Throws InvalidArgument unless n >= 3, h > 0 and both arrays have n entries.
  void validate() const;
};

enum class PdeScheme { SemiImplicit, Explicit };

std::string_view to_string(PdeScheme scheme) noexcept;
PdeScheme pde_scheme_from_string(std::string_view name);

struct PdeConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  PdeScheme scheme = PdeScheme::SemiImplicit;
  bool energy_audit = true;
  int snapshots = 10;  ///< evenly spaced in step count, plus the initial state
  double energy_tol = 1e-7;

  void validate() const;
};

/// Largest stable explicit step h^2 / (2 max(mu1, mu2)); infinity when both are 0.
double explicit_dt_limit(const Field1D& fields, const CoefficientModel& model);

/// One step of the reaction-diffusion system with zero-flux ends. Throws
/// CflViolation for an explicit step above the diffusive limit.
Field1D step(const Field1D& fields, const ThermoState& state, const CoefficientModel& model, double dt,
             PdeScheme scheme);

/// Gradient energy on grid edges plus trapezoid-weighted bulk free energy.
double discrete_energy(const Field1D& fields, const ThermoState& state, const CoefficientModel& model);

/// Trapezoid-weighted sum of rho, the quantity a pure diffusion step conserves.
double discrete_mass(const Field1D& fields);

struct BoundaryFlux {
  double left = 0.0;
  double right = 0.0;
};

/// Second-order one-sided estimates of d rho/dx at both ends.
BoundaryFlux boundary_flux(const Field1D& fields);

struct Snapshot {
  double t = 0.0;
  Field1D fields;
  BoundaryFlux flux;
};

struct SimulationResult {
  std::vector<Snapshot> snapshots;
  std::vector<std::pair<double, double>> energy;  ///< (t, E) after every step when audited
  double max_energy_increase = 0.0;
  bool energy_ok = true;
  long steps = 0;
};

SimulationResult simulate(const Field1D& fields0, const ThermoState& state, const CoefficientModel& model,
                          const PdeConfig& cfg);

}  // namespace pvt
