#pragma once

#include <array>
#include <string>
#include <string_view>

namespace pvt {

/// Control parameters of a PVT system. Both components are strictly positive.
struct ThermoState {
  double T = 1.0;
  double p = 1.0;
};

/// Polynomial in (dT, dp) = (T - Tref, p - pref) of total degree <= 2.
/// Coefficient order: constant, dT, dp, dT^2, dT*dp, dp^2.
struct Poly2 {
  std::array<double, 6> c{};

  static Poly2 constant(double value) { return Poly2{{value, 0, 0, 0, 0, 0}}; }
  static Poly2 linear(double c0, double cT, double cp) { return Poly2{{c0, cT, cp, 0, 0, 0}}; }

  double operator()(double dT, double dp) const noexcept {
    return c[0] + c[1] * dT + c[2] * dp + c[3] * dT * dT + c[4] * dT * dp + c[5] * dp * dp;
  }
  bool operator==(const Poly2&) const = default;
};

struct ValidityBox {
  double T_min = 1e-3;
  double T_max = 1e3;
  double p_min = 1e-6;
  double p_max = 1e3;

  bool contains(const ThermoState& s) const noexcept {
    return s.T >= T_min && s.T <= T_max && s.p >= p_min && s.p <= p_max;
  }
  bool operator==(const ValidityBox&) const = default;
};

enum class Preset { Constant, Vdw, Landau, Custom };

std::string_view to_string(Preset preset) noexcept;
Preset preset_from_string(std::string_view name);

/// The (T,p)-dependent coefficients of the homogeneous Gibbs free energy
///
///   G = 1/2 a1 rho^2 + 1/2 b1 S^2 + b2 S rho^2 - 1/3 a2 rho^3 + 1/4 a3 rho^4
///       + 1/2 b rho^2 p - rho p - S T + Gref
///
/// plus the gradient-energy weights mu1, mu2 used by the spatial model.
struct CoefficientModel {
  Preset preset = Preset::Custom;
  double T_ref = 0.0;
  double p_ref = 0.0;
  Poly2 alpha1;
  Poly2 alpha2;
  Poly2 alpha3;
  Poly2 beta1;
  Poly2 beta2;
  Poly2 b;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double g_ref = 0.0;
  ValidityBox box;

  /// Throws InvalidArgument for negative gradient weights or an empty /
  /// non-positive validity box.
  void validate() const;

  bool operator==(const CoefficientModel&) const = default;
};

/// The six coefficient values at one state.
struct CoefficientValues {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double b = 0.0;

  /// Effective cubic coefficient once the entropy has been eliminated.
  double cubic() const noexcept { return alpha3 - 2.0 * beta2 * beta2 / beta1; }
  /// Effective linear damping alpha1 + b p + 2 beta2 T / beta1.
  double linear(const ThermoState& s) const noexcept {
    return alpha1 + b * s.p + 2.0 * beta2 * s.T / beta1;
  }
};

struct VdwParams {
  double a = 1.0;
  double b = 1.0;
  double R = 1.0;
};

/// Coefficients of the shifted scalar flow d rho/dt = lambda rho + a2 rho^2 - a3 rho^3.
struct ReducedCoeffs {
  double lambda = 0.0;
  double a2 = 0.0;
  double a3 = 1.0;
  double rho0 = 0.0;

  double discriminant() const noexcept { return a2 * a2 + 4.0 * a3 * lambda; }
  double rhs(double rho) const noexcept { return rho * (lambda + rho * (a2 - a3 * rho)); }
  double fprime(double rho) const noexcept { return lambda + 2.0 * a2 * rho - 3.0 * a3 * rho * rho; }
  /// Potential V with dV/drho = -rhs; V(0) = 0.
  double potential(double rho) const noexcept {
    const double r2 = rho * rho;
    return -0.5 * lambda * r2 - a2 * r2 * rho / 3.0 + 0.25 * a3 * r2 * r2;
  }
};

/// Local mean-field data near a critical point: lambda(T) = alpha_slope (T_C - T).
struct LandauLocal {
  double alpha_slope = 1.0;
  double T_C = 1.0;
  double a3 = 1.0;
  double a2 = 0.0;
};

/// Steady-state polynomial of the entropy-eliminated flow,
/// f(rho) = c0 + c1 rho + c2 rho^2 + c3 rho^3.
struct SteadyCubic {
  std::array<double, 4> c{};

  double operator()(double rho) const noexcept { return c[0] + rho * (c[1] + rho * (c[2] + rho * c[3])); }
  double derivative(double rho) const noexcept { return c[1] + rho * (2.0 * c[2] + 3.0 * rho * c[3]); }
  double second(double rho) const noexcept { return 2.0 * c[2] + 6.0 * rho * c[3]; }
};

// --- coefficient evaluation -------------------------------------------------

/// Evaluates the coefficient polynomials; throws OutOfValidityBox or
/// PositivityViolation (alpha2, alpha3, beta1 must be > 0).
CoefficientValues eval_coefficients(const CoefficientModel& model, const ThermoState& state);

// --- free energies ----------------------------------------------------------

double gibbs_homogeneous(double rho, double S, const ThermoState& state, const CoefficientModel& model);
double gibbs_homogeneous(double rho, double S, const ThermoState& state, const CoefficientValues& cv,
                         double g_ref);

/// S = (T - beta2 rho^2) / beta1, the entropy that zeroes dS/dt.
double eliminate_entropy(double rho, const ThermoState& state, const CoefficientModel& model);

double gibbs_reduced(double rho, const ThermoState& state, const CoefficientModel& model);
double gibbs_reduced(double rho, const ThermoState& state, const CoefficientValues& cv, double g_ref);

/// Right-hand side of the coupled (rho, S) flow.
std::array<double, 2> coupled_rhs(double rho, double S, const ThermoState& state, const CoefficientValues& cv);

SteadyCubic steady_cubic(const ThermoState& state, const CoefficientValues& cv);
SteadyCubic steady_cubic(const ThermoState& state, const CoefficientModel& model);

/// Right-hand side of the entropy-eliminated scalar flow.
double full_rhs(double rho, const ThermoState& state, const CoefficientModel& model);

/// Throws NonPositiveCubic when alpha3 - 2 beta2^2 / beta1 <= 0.
ReducedCoeffs reduced_coefficients(double rho0, const ThermoState& state, const CoefficientModel& model);
ReducedCoeffs reduced_coefficients(double rho0, const ThermoState& state, const CoefficientValues& cv);

// --- van der Waals ----------------------------------------------------------

/// -(b p + R T) rho + a rho^2 - a b rho^3 + p.
double vdw_residual(double rho, const ThermoState& state, const VdwParams& vdw);
/// Molar-volume form v^3 - (b + RT/p) v^2 + (a/p) v - ab/p.
double vdw_residual_molar(double v, const ThermoState& state, const VdwParams& vdw);
/// Isotherm pressure p(v, T) = RT/(v - b) - a/v^2.
double vdw_pressure(double v, double T, const VdwParams& vdw);

ValidityBox default_vdw_box();

/// Model whose steady-state equation is identically the van der Waals
/// equation: alpha1 = 0, beta2 = R beta1 / 2, alpha2 = a, alpha3 = ab + 2 beta2^2/beta1.
CoefficientModel vdw_compatible_model(const VdwParams& vdw, double beta1 = 1.0,
                                      const ValidityBox& box = default_vdw_box());

// --- other presets ----------------------------------------------------------

CoefficientModel constant_model(const CoefficientValues& values, const ValidityBox& box = {},
                                double mu1 = 0.0, double mu2 = 0.0, double g_ref = 0.0);

/// Parameters of the Landau-linear preset. The preset keeps rho_ref as an
/// exact steady state for every (T, p) and realizes
///
///   lambda(T, p) = alpha_slope (T_C - T)
///   a2(T, p)     = a2_c + (p - p_C) / rho_ref^2
///   a3(T, p)     = a3_c - alpha_slope (T - T_C) / rho_ref^2
///
/// with p_C = a2_c rho_ref^2 + a3_c rho_ref^3. With a2_c = 0 the two curves
/// lambda = 0 and a2 = 0 meet at (T_C, p_C).
struct LandauPresetParams {
  double alpha_slope = 2.0;
  double T_C = 1.0;
  double a3_c = 1.0;
  double a2_c = 0.0;
  double rho_ref = 1.0;
  double T_half_width = 0.2;
  double p_half_width = 0.6;
  double mu1 = 0.0;
  double mu2 = 0.0;

  double p_critical() const noexcept {
    return a2_c * rho_ref * rho_ref + a3_c * rho_ref * rho_ref * rho_ref;
  }
};

CoefficientModel landau_model(const LandauPresetParams& params);

}  // namespace pvt
