#include "pvt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pvt/error.hpp"

namespace pvt {

std::string_view to_string(Preset preset) noexcept {
  switch (preset) {
    case Preset::Constant: return "constant";
    case Preset::Vdw: return "vdw";
    case Preset::Landau: return "landau";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

Preset preset_from_string(std::string_view name) {
  if (name == "constant") return Preset::Constant;
  if (name == "vdw") return Preset::Vdw;
  if (name == "landau") return Preset::Landau;
  if (name == "custom") return Preset::Custom;
  throw Error(ErrorKind::ParseError, "unknown preset '" + std::string(name) + "'");
}

void CoefficientModel::validate() const {
  if (!(mu1 >= 0.0) || !(mu2 >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gradient coefficients mu1, mu2 must be >= 0");
  }
  if (!(box.T_min <= box.T_max) || !(box.p_min <= box.p_max)) {
    throw Error(ErrorKind::InvalidArgument, "validity box is empty");
  }
  if (!(box.T_min > 0.0) || !(box.p_min > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "validity box must lie in T > 0, p > 0");
  }
}

CoefficientValues eval_coefficients(const CoefficientModel& model, const ThermoState& state) {
  if (!model.box.contains(state)) {
    std::ostringstream os;
    os << "state (T=" << state.T << ", p=" << state.p << ") outside [" << model.box.T_min << ", "
       << model.box.T_max << "] x [" << model.box.p_min << ", " << model.box.p_max << "]";
    throw Error(ErrorKind::OutOfValidityBox, os.str());
  }
  const double dT = state.T - model.T_ref;
  const double dp = state.p - model.p_ref;
  CoefficientValues v;
  v.alpha1 = model.alpha1(dT, dp);
  v.alpha2 = model.alpha2(dT, dp);
  v.alpha3 = model.alpha3(dT, dp);
  v.beta1 = model.beta1(dT, dp);
  v.beta2 = model.beta2(dT, dp);
  v.b = model.b(dT, dp);
  if (!(v.alpha2 > 0.0) || !(v.alpha3 > 0.0) || !(v.beta1 > 0.0)) {
    std::ostringstream os;
    os << "alpha2=" << v.alpha2 << ", alpha3=" << v.alpha3 << ", beta1=" << v.beta1 << " at (T=" << state.T
       << ", p=" << state.p << ")";
    throw Error(ErrorKind::PositivityViolation, os.str());
  }
  return v;
}

double gibbs_homogeneous(double rho, double S, const ThermoState& s, const CoefficientValues& cv,
                         double g_ref) {
  const double r2 = rho * rho;
  return 0.5 * cv.alpha1 * r2 + 0.5 * cv.beta1 * S * S + cv.beta2 * S * r2 - cv.alpha2 * r2 * rho / 3.0 +
         0.25 * cv.alpha3 * r2 * r2 + 0.5 * cv.b * r2 * s.p - rho * s.p - S * s.T + g_ref;
}

double gibbs_homogeneous(double rho, double S, const ThermoState& state, const CoefficientModel& model) {
  return gibbs_homogeneous(rho, S, state, eval_coefficients(model, state), model.g_ref);
}

double eliminate_entropy(double rho, const ThermoState& state, const CoefficientModel& model) {
  const auto cv = eval_coefficients(model, state);
  return (state.T - cv.beta2 * rho * rho) / cv.beta1;
}

double gibbs_reduced(double rho, const ThermoState& s, const CoefficientValues& cv, double g_ref) {
  const double r2 = rho * rho;
  return -0.5 * s.T * s.T / cv.beta1 + 0.5 * cv.linear(s) * r2 - cv.alpha2 * r2 * rho / 3.0 +
         0.25 * cv.cubic() * r2 * r2 - s.p * rho + g_ref;
}

double gibbs_reduced(double rho, const ThermoState& state, const CoefficientModel& model) {
  return gibbs_reduced(rho, state, eval_coefficients(model, state), model.g_ref);
}

std::array<double, 2> coupled_rhs(double rho, double S, const ThermoState& s, const CoefficientValues& cv) {
  const double r2 = rho * rho;
  return {-(cv.alpha1 + cv.b * s.p) * rho + cv.alpha2 * r2 - cv.alpha3 * r2 * rho - 2.0 * cv.beta2 * S * rho + s.p,
          -cv.beta1 * S - cv.beta2 * r2 + s.T};
}

SteadyCubic steady_cubic(const ThermoState& s, const CoefficientValues& cv) {
  return SteadyCubic{{s.p, -cv.linear(s), cv.alpha2, -cv.cubic()}};
}

SteadyCubic steady_cubic(const ThermoState& state, const CoefficientModel& model) {
  return steady_cubic(state, eval_coefficients(model, state));
}

double full_rhs(double rho, const ThermoState& state, const CoefficientModel& model) {
  return steady_cubic(state, model)(rho);
}

ReducedCoeffs reduced_coefficients(double rho0, const ThermoState& s, const CoefficientValues& cv) {
  const double a3 = cv.cubic();
  if (!(a3 > 0.0)) {
    std::ostringstream os;
    os << "a3 = alpha3 - 2 beta2^2/beta1 = " << a3 << " at (T=" << s.T << ", p=" << s.p << ")";
    throw Error(ErrorKind::NonPositiveCubic, os.str());
  }
  ReducedCoeffs rc;
  rc.a3 = a3;
  rc.a2 = cv.alpha2 - 3.0 * a3 * rho0;
  rc.lambda = 2.0 * cv.alpha2 * rho0 - 3.0 * a3 * rho0 * rho0 - cv.linear(s);
  rc.rho0 = rho0;
  return rc;
}

ReducedCoeffs reduced_coefficients(double rho0, const ThermoState& state, const CoefficientModel& model) {
  return reduced_coefficients(rho0, state, eval_coefficients(model, state));
}

double vdw_residual(double rho, const ThermoState& s, const VdwParams& w) {
  return -(w.b * s.p + w.R * s.T) * rho + w.a * rho * rho - w.a * w.b * rho * rho * rho + s.p;
}

double vdw_residual_molar(double v, const ThermoState& s, const VdwParams& w) {
  return v * v * v - (w.b + w.R * s.T / s.p) * v * v + (w.a / s.p) * v - w.a * w.b / s.p;
}

double vdw_pressure(double v, double T, const VdwParams& w) { return w.R * T / (v - w.b) - w.a / (v * v); }

ValidityBox default_vdw_box() { return ValidityBox{1e-3, 100.0, 1e-8, 100.0}; }

CoefficientModel vdw_compatible_model(const VdwParams& vdw, double beta1, const ValidityBox& box) {
  if (!(vdw.a > 0.0) || !(vdw.b > 0.0) || !(vdw.R > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "van der Waals constants a, b, R must be > 0");
  }
  if (!(beta1 > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta1 must be > 0");
  const double beta2 = 0.5 * vdw.R * beta1;
  CoefficientModel m;
  m.preset = Preset::Vdw;
  m.alpha1 = Poly2::constant(0.0);
  m.alpha2 = Poly2::constant(vdw.a);
  m.alpha3 = Poly2::constant(vdw.a * vdw.b + 2.0 * beta2 * beta2 / beta1);
  m.beta1 = Poly2::constant(beta1);
  m.beta2 = Poly2::constant(beta2);
  m.b = Poly2::constant(vdw.b);
  m.box = box;
  m.validate();
  return m;
}

CoefficientModel constant_model(const CoefficientValues& v, const ValidityBox& box, double mu1, double mu2,
                                double g_ref) {
  CoefficientModel m;
  m.preset = Preset::Constant;
  m.alpha1 = Poly2::constant(v.alpha1);
  m.alpha2 = Poly2::constant(v.alpha2);
  m.alpha3 = Poly2::constant(v.alpha3);
  m.beta1 = Poly2::constant(v.beta1);
  m.beta2 = Poly2::constant(v.beta2);
  m.b = Poly2::constant(v.b);
  m.mu1 = mu1;
  m.mu2 = mu2;
  m.g_ref = g_ref;
  m.box = box;
  m.validate();
  return m;
}

CoefficientModel landau_model(const LandauPresetParams& lp) {
  const double r = lp.rho_ref;
  const double al = lp.alpha_slope;
  if (!(r > 0.0) || !(al > 0.0) || !(lp.a3_c > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Landau preset needs rho_ref > 0, alpha_slope > 0, a3_c > 0");
  }
  const double p_c = lp.p_critical();
  CoefficientModel m;
  m.preset = Preset::Landau;
  m.T_ref = lp.T_C;
  m.p_ref = p_c;
  m.beta1 = Poly2::constant(1.0);
  m.beta2 = Poly2::constant(0.0);
  m.b = Poly2::constant(0.0);
  m.alpha3 = Poly2::linear(lp.a3_c, -al / (r * r), 0.0);
  m.alpha2 = Poly2::linear(lp.a2_c + 3.0 * r * lp.a3_c, -3.0 * al / r, 1.0 / (r * r));
  m.alpha1 = Poly2::linear(2.0 * r * lp.a2_c + 3.0 * r * r * lp.a3_c, -2.0 * al, 2.0 / r);
  m.mu1 = lp.mu1;
  m.mu2 = lp.mu2;
  m.box = ValidityBox{lp.T_C - lp.T_half_width, lp.T_C + lp.T_half_width,
                      std::max(p_c - lp.p_half_width, 1e-6), p_c + lp.p_half_width};
  m.validate();
  // alpha2 and alpha3 are affine, so checking the corners covers the box.
  for (double T : {m.box.T_min, m.box.T_max}) {
    for (double p : {m.box.p_min, m.box.p_max}) {
      (void)eval_coefficients(m, ThermoState{T, p});
    }
  }
  return m;
}

}  // namespace pvt
