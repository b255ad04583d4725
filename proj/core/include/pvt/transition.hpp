#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pvt/branch.hpp"
#include "pvt/equilibria.hpp"
#include "pvt/model.hpp"

namespace pvt {

inline constexpr double kA2Tol = 1e-8;
inline constexpr double kCriticalTol = 1e-8;

enum class DynamicType { I, II, III };
enum class ThermoOrder { First, Second, Third };

std::string_view to_string(DynamicType type) noexcept;
std::string_view to_string(ThermoOrder order) noexcept;

struct SaddleNode {
  double T = 0.0;
  double p = 0.0;
  double rho_offset = 0.0;  ///< a2 / (2 a3), relative to the reference root
  double rho = 0.0;         ///< absolute density of the colliding pair
};

struct TransitionReport {
  DynamicType dynamic_type = DynamicType::I;
  ThermoOrder thermo_order = ThermoOrder::Second;
  ThermoState critical_state;
  double rho0 = 0.0;
  ReducedCoeffs reduced;
  int leading_order = 3;
  double leading_coeff = -1.0;
  std::optional<SaddleNode> saddle_node;
  std::string notes;
};

/// Dynamic type and leading term at a critical point. Throws NotCritical when
/// |lambda| > tol and NonPositiveCubic when a3 <= 0.
TransitionReport classify_local(const ReducedCoeffs& rc, double tol = kCriticalTol, double a2_tol = kA2Tol);

ThermoOrder transition_order(const ReducedCoeffs& rc, double tol = kCriticalTol, double a2_tol = kA2Tol);

/// Steady state at `state` with the smallest |f'|; the natural reference at a
/// point where lambda vanishes.
double critical_reference_root(const CoefficientModel& model, const ThermoState& state);

ThermoOrder transition_order(const CoefficientModel& model, const ThermoState& critical_state,
                             std::optional<double> rho0 = std::nullopt);

/// Full report at a model state: classification, order, and the saddle-node
/// above the critical temperature when a2 != 0 and one is found.
TransitionReport classify(const CoefficientModel& model, const ThermoState& state,
                          std::optional<double> rho0 = std::nullopt);

// --- critical curve ---------------------------------------------------------

struct CriticalSample {
  double p = 0.0;
  double T = 0.0;
  double rho0 = 0.0;
  double a2 = 0.0;
  CriticalKind kind = CriticalKind::Crossing;
  double lambda_above = 0.0;  ///< lambda at T + delta; NaN when no reference root exists there
  double lambda_below = 0.0;  ///< lambda at T - delta
};

struct CriticalCurve {
  std::vector<CriticalSample> samples;
  std::vector<double> skipped;  ///< pressures with no lambda = 0 event in the window
  int slope_sign = 0;           ///< +1 / -1 when T(p) is strictly monotone, 0 otherwise
  bool monotone = false;
};

struct SweepWindow {
  double T_min = 0.0;
  double T_max = 0.0;
  int steps = 400;
};

/// Samples `count` evenly spaced pressures in [p_min, p_max] (count = 1 uses
/// p_min alone).
CriticalCurve critical_curve_trace(const CoefficientModel& model, double p_min, double p_max, int count,
                                   const SweepWindow& window, double delta = 0.01);

// --- Andrews point ----------------------------------------------------------

struct AndrewsPoint {
  double T_C = 0.0;
  double p_C = 0.0;
  double rho_C = 0.0;
  double residual = 0.0;  ///< max-norm of (steady residual, lambda, a2)
  int iterations = 0;
};

struct AndrewsGuess {
  double rho = 0.0;
  double T = 0.0;
  double p = 0.0;
};

/// Damped Newton on (f(rho), lambda, a2) = 0 in (rho, T, p). Throws
/// NoConvergence or SingularJacobian.
AndrewsPoint andrews_point(const CoefficientModel& model, const AndrewsGuess& guess, int max_iter = 100);

// --- saddle-node ------------------------------------------------------------

/// Fold above the critical temperature at fixed p. Throws NoFoldInWindow.
SaddleNode saddle_node_locate(const CoefficientModel& model, double p, const SweepWindow& window);

/// Fold along increasing p at fixed T, starting from the low-pressure end.
SaddleNode saddle_node_locate_pressure(const CoefficientModel& model, double T, double p_min, double p_max,
                                       int steps = 400);

using ReducedPath = std::function<ReducedCoeffs(double)>;

struct PathFold {
  double s = 0.0;
  double rho_offset = 0.0;
};

/// Fold of a one-parameter family of reduced coefficients on [s_lo, s_hi].
PathFold saddle_node_locate(const ReducedPath& path, double s_lo, double s_hi, int steps = 400,
                            double a2_tol = kA2Tol);

// --- transition functions ---------------------------------------------------

struct TransitionFunctionTable {
  Branch branch = Branch::Plus;
  std::vector<std::pair<double, double>> samples;  ///< (T, Phi(T)); Phi is NaN where undefined
  std::optional<double> T_star;
  double T0 = 0.0;
  std::optional<double> T1;
};

struct TransitionRow {
  double T = 0.0;
  double phi_plus = 0.0;
  double phi_minus = 0.0;
  double G_plus = 0.0;
  double G_zero = 0.0;
};

/// The observed density branches Phi+ and Phi- near the critical temperature
/// T0 on an isobar, with the jump temperature T* and the fold T1.
class TransitionFunctions {
 public:
  TransitionFunctions(const CoefficientModel& model, double p, const SweepWindow& window);

  double pressure() const noexcept { return p_; }
  double T0() const noexcept { return T0_; }
  double rho0_at_T0() const noexcept { return rho0_c_; }
  double a2_at_T0() const noexcept { return a2_c_; }
  std::optional<double> T1() const noexcept { return T1_; }
  std::optional<double> T_star() const noexcept { return T_star_; }
  const ReferenceBranch& branch() const noexcept { return branch_; }

  std::optional<double> rho0(double T) const { return branch_.rho0(T); }
  std::optional<double> phi_plus(double T) const;
  std::optional<double> phi_minus(double T) const;
  /// Reference root plus the plus or minus offset, regardless of the region.
  std::optional<double> shifted(double T, Branch which) const;

  double gibbs(double rho, double T) const;

  std::pair<TransitionFunctionTable, TransitionFunctionTable> tables(double T_min, double T_max, int count) const;
  std::vector<TransitionRow> rows(double T_min, double T_max, int count) const;

 private:
  CoefficientModel model_;
  double p_;
  ReferenceBranch branch_;
  double T0_ = 0.0;
  double rho0_c_ = 0.0;
  double a2_c_ = 0.0;
  std::optional<double> T1_;
  std::optional<double> T_star_;
};

std::pair<TransitionFunctionTable, TransitionFunctionTable> transition_functions(const CoefficientModel& model,
                                                                                 double p, const SweepWindow& window,
                                                                                 int count = 201);

// --- free energies and thermodynamic signatures -----------------------------

struct EquilibriumEnergies {
  std::optional<double> G_plus;
  std::optional<double> G_minus;
  double G_zero = 0.0;
};

/// G at rho0 + rho_pm from the reduced coefficients and G(rho0). Throws
/// BranchMissing when the discriminant is negative.
EquilibriumEnergies free_energy_at_equilibria(const ReducedCoeffs& rc, double G_at_rho0);

struct ThermoSignature {
  double T0 = 0.0;
  double T_star = 0.0;
  double T1 = 0.0;
  double p = 0.0;
  double rho_gas = 0.0;
  double rho_liquid = 0.0;
  double deltaE = 0.0;          ///< G(liquid) - G(gas) where the gas branch loses stability
  double deltaE_at_star = 0.0;  ///< the same gap at T*, zero up to round-off
  double deltaS = 0.0;
  double deltaV = 0.0;
  double deltaH = 0.0;
  double deltaC = 0.0;
};

/// Throws NotFirstOrder unless a2 > a2_tol at the critical point on the isobar.
ThermoSignature thermo_signature(const CoefficientModel& model, double p, const SweepWindow& window);

double heat_capacity_jump(const LandauLocal& landau, double a2_tol = kA2Tol);

struct DerivativeJump {
  double below = 0.0;
  double above = 0.0;
  double jump() const noexcept { return below - above; }
};

/// One-sided limits of the order-th derivative of g at x0 (order 0..3), each
/// extrapolated quadratically from offsets delta, 2 delta and 3 delta.
DerivativeJump derivative_jump(const std::function<double(double)>& g, double x0, int order, double delta);

/// Jump of -T d^2 G(Phi+)/dT^2 across T0 (below minus above).
double numeric_heat_capacity_jump(const TransitionFunctions& tf, double delta = 1e-3);

struct CoexistenceSample {
  double p = 0.0;
  double T_star = 0.0;
  double rho_gas = 0.0;
  double rho_liquid = 0.0;
  double deltaS = 0.0;
  double deltaV = 0.0;
  double deltaH = 0.0;
  double dpdT_curve = 0.0;
  double dpdT_clapeyron = 0.0;

  double residual() const noexcept { return (dpdT_curve - dpdT_clapeyron) / dpdT_clapeyron; }
};

struct CoexistenceCurve {
  std::vector<CoexistenceSample> samples;
  std::vector<double> skipped;
};

CoexistenceCurve coexistence_trace(const CoefficientModel& model, double p_min, double p_max, int count,
                                   const SweepWindow& window);

struct WindowSample {
  double T = 0.0;
  double rho_gas = 0.0;
  double rho_separatrix = 0.0;
  double rho_liquid = 0.0;
  double gas_basin = 0.0;
  double liquid_basin = 0.0;
  int stable_count = 0;
};

struct MetastableWindow {
  double T0 = 0.0;
  double T1 = 0.0;
  std::vector<WindowSample> samples;
};

/// Bistability window [T0, T1] on an isobar. Throws NotFirstOrder when a2 <= 0.
MetastableWindow metastable_window(const CoefficientModel& model, double p, const SweepWindow& window,
                                   int count = 21);

struct BifurcationRow {
  double T = 0.0;
  double lambda = 0.0;  ///< on the reference root; NaN where it does not exist
  double rho = 0.0;
  Branch branch = Branch::Unlabeled;
  bool stable = false;
  std::string marker;  ///< "critical" at T0, "fold" at T1, empty otherwise
};

/// Every steady state on `count` temperatures of the window, labelled relative
/// to the reference root, plus marker rows at T0 and T1.
std::vector<BifurcationRow> bifurcation_diagram(const CoefficientModel& model, double p, const SweepWindow& window,
                                                int count);

}  // namespace pvt
