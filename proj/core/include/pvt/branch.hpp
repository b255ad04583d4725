#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pvt/model.hpp"

namespace pvt {

enum class SweepAxis { Temperature, Pressure };

/// A one-parameter line in the (T, p) plane: T varies at fixed p, or p at fixed T.
struct StateLine {
  SweepAxis axis = SweepAxis::Temperature;
  double fixed = 1.0;

  ThermoState at(double s) const noexcept {
    return axis == SweepAxis::Temperature ? ThermoState{s, fixed} : ThermoState{fixed, s};
  }
};

enum class CriticalKind {
  Crossing,  ///< lambda changes sign on a persisting reference root
  Fold,      ///< the reference root collides with a neighbour and disappears
  Touch,     ///< lambda touches zero without a sign change (triple root)
};

std::string_view to_string(CriticalKind kind) noexcept;

struct BranchSample {
  double s = 0.0;
  double rho0 = 0.0;
  ReducedCoeffs rc;
};

struct CriticalEvent {
  double s = 0.0;
  double rho0 = 0.0;
  ReducedCoeffs rc;
  CriticalKind kind = CriticalKind::Crossing;
};

/// Reference steady state rho0 followed by continuation along a line, starting
/// from the low-density (gas) root at `s_start` and stepping toward `s_end`.
/// The reduced coefficients along the branch define lambda(s), a2(s), a3(s).
class ReferenceBranch {
 public:
  /// `seed` replaces the gas-branch choice of the starting root.
  ReferenceBranch(const CoefficientModel& model, StateLine line, double s_start, double s_end,
                  int steps = 400, std::optional<double> seed = std::nullopt);

  const CoefficientModel& model() const noexcept { return model_; }
  const StateLine& line() const noexcept { return line_; }
  const std::vector<BranchSample>& samples() const noexcept { return samples_; }
  bool vanished() const noexcept { return vanished_; }

  /// Reference root at s, or nullopt where the branch does not exist.
  std::optional<double> rho0(double s) const;
  std::optional<ReducedCoeffs> reduced(double s) const;

  /// First lambda = 0 event met from the gas end, or nullopt.
  std::optional<CriticalEvent> critical() const;

  /// s where a2^2 + 4 a3 lambda changes sign between `from` (a critical
  /// parameter) and the gas end of the line, or nullopt.
  std::optional<double> fold_after(double from) const;

  /// First s past the start where a2^2 + 4 a3 lambda changes sign.
  std::optional<double> first_discriminant_change() const;

  /// Index direction: +1 when s increases along the sweep, -1 otherwise.
  double direction() const noexcept { return dir_; }

 private:
  std::optional<double> nearest_root(double s, double guess, std::optional<double> lambda_sign) const;
  std::optional<double> polish_from(double s, double guess) const;
  std::optional<CriticalEvent> solve_fold(double rho, double s, double lo, double hi, CriticalKind kind) const;

  CoefficientModel model_;
  StateLine line_;
  double s_start_;
  double s_end_;
  double step_;
  double dir_;
  std::vector<BranchSample> samples_;
  bool vanished_ = false;
};

}  // namespace pvt
