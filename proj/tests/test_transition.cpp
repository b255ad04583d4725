#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pvt/error.hpp"
#include "pvt/transition.hpp"

using namespace pvt;

namespace {

CoefficientModel landau(double a2_c) {
  LandauPresetParams params;
  params.a2_c = a2_c;
  return landau_model(params);
}

const SweepWindow kLandauWindow{0.85, 1.15, 400};
const SweepWindow kVdwWindow{0.1, 0.4, 400};

template <class Fn>
ErrorKind kind_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

// Largest value of lambda + a2 r - a3 r^2 by ternary search.
double quadratic_peak(const ReducedCoeffs& rc) {
  double lo = -100.0, hi = 100.0;
  auto q = [&](double r) { return rc.lambda + rc.a2 * r - rc.a3 * r * r; };
  for (int i = 0; i < 300; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    (q(m1) < q(m2) ? lo : hi) = (q(m1) < q(m2) ? m1 : m2);
  }
  return q(0.5 * (lo + hi));
}

}  // namespace

TEST(ClassifyLocal, PitchforkIsTypeOne) {
  const auto r = classify_local(ReducedCoeffs{0.0, 0.0, 1.0, 0.0});
  EXPECT_EQ(r.dynamic_type, DynamicType::I);
  EXPECT_EQ(r.leading_order, 3);
  EXPECT_EQ(r.leading_coeff, -1.0);
  EXPECT_EQ(r.thermo_order, ThermoOrder::Second);
}

TEST(ClassifyLocal, QuadraticTermMakesTypeThree) {
  const auto r = classify_local(ReducedCoeffs{0.0, 0.5, 1.0, 0.0});
  EXPECT_EQ(r.dynamic_type, DynamicType::III);
  EXPECT_EQ(r.leading_order, 2);
  EXPECT_EQ(r.leading_coeff, 0.5);
}

TEST(ClassifyLocal, RejectsNonCriticalState) {
  EXPECT_EQ(kind_of([] { classify_local(ReducedCoeffs{0.1, 0.0, 1.0, 0.0}); }), ErrorKind::NotCritical);
}

TEST(ClassifyLocal, RejectsNonPositiveCubic) {
  EXPECT_EQ(kind_of([] { classify_local(ReducedCoeffs{0.0, 0.2, -1.0, 0.0}); }), ErrorKind::NonPositiveCubic);
}

TEST(TransitionOrder, FollowsQuadraticSign) {
  EXPECT_EQ(transition_order(ReducedCoeffs{0.0, 0.5, 1.0, 0.0}), ThermoOrder::First);
  EXPECT_EQ(transition_order(ReducedCoeffs{0.0, 0.0, 1.0, 0.0}), ThermoOrder::Second);
  EXPECT_EQ(transition_order(ReducedCoeffs{0.0, -0.5, 1.0, 0.0}), ThermoOrder::Third);
  EXPECT_EQ(transition_order(ReducedCoeffs{0.0, 5e-9, 1.0, 0.0}), ThermoOrder::Second);
}

TEST(TransitionOrder, ModelStates) {
  EXPECT_EQ(transition_order(landau(0.5), {1.0, 1.5}), ThermoOrder::First);
  EXPECT_EQ(transition_order(landau(0.0), {1.0, 1.0}), ThermoOrder::Second);
  EXPECT_EQ(transition_order(landau(-0.5), {1.0, 0.5}), ThermoOrder::Third);
  EXPECT_EQ(kind_of([] { transition_order(landau(0.0), {0.9, 1.0}); }), ErrorKind::NotCritical);
}

TEST(Classify, LandauCriticalPoints) {
  const auto second = classify(landau(0.0), {1.0, 1.0});
  EXPECT_EQ(second.dynamic_type, DynamicType::I);
  EXPECT_EQ(second.thermo_order, ThermoOrder::Second);
  EXPECT_FALSE(second.saddle_node.has_value());

  const auto first = classify(landau(0.5), {1.0, 1.5}, 1.0);
  EXPECT_EQ(first.dynamic_type, DynamicType::III);
  EXPECT_EQ(first.thermo_order, ThermoOrder::First);
  ASSERT_TRUE(first.saddle_node.has_value());
  // 16 u^2 - 8 u + 1/4 = 0 with u = T1 - T_C for this preset.
  EXPECT_NEAR(first.saddle_node->T, 1.0 + (8.0 - std::sqrt(48.0)) / 32.0, 1e-9);

  const auto third = classify(landau(-0.5), {1.0, 0.5}, 1.0);
  EXPECT_EQ(third.dynamic_type, DynamicType::III);
  EXPECT_EQ(third.thermo_order, ThermoOrder::Third);
}

TEST(Classify, VdwAndrewsPointIsSecondOrder) {
  const auto model = vdw_compatible_model(VdwParams{});
  const auto a = andrews_point(model, AndrewsGuess{0.3, 0.3, 0.04});
  const auto r = classify(model, {a.T_C, a.p_C}, a.rho_C);
  EXPECT_EQ(r.dynamic_type, DynamicType::I);
  EXPECT_EQ(r.thermo_order, ThermoOrder::Second);
}

TEST(CriticalCurve, LandauIsFlat) {
  const auto curve = critical_curve_trace(landau(0.0), 0.7, 1.3, 7, kLandauWindow);
  ASSERT_EQ(curve.samples.size(), 7u);
  for (const auto& s : curve.samples) {
    EXPECT_NEAR(s.T, 1.0, 1e-8);
    EXPECT_LT(s.lambda_above, 0.0);
    EXPECT_GT(s.lambda_below, 0.0);
  }
}

TEST(CriticalCurve, VdwEndsAtCriticalPoint) {
  const auto crit = oracle::vdw_critical(1.0, 1.0, 1.0);
  const auto model = vdw_compatible_model(VdwParams{});
  const auto curve = critical_curve_trace(model, 0.01, crit.p, 9, kVdwWindow);
  ASSERT_EQ(curve.samples.size(), 9u);
  EXPECT_TRUE(curve.skipped.empty());
  EXPECT_NEAR(curve.samples.back().T, crit.T, 1e-7);
  EXPECT_EQ(curve.slope_sign, 1);
  for (const auto& s : curve.samples) {
    const auto rc = reduced_coefficients(s.rho0, {s.T, s.p}, model);
    EXPECT_NEAR(rc.lambda, 0.0, 1e-8);
    EXPECT_LT(s.lambda_above, 0.0);
    if (s.kind == CriticalKind::Touch) {
      EXPECT_LT(s.lambda_below, 0.0);
    } else {
      EXPECT_EQ(s.kind, CriticalKind::Fold);
      EXPECT_FALSE(s.lambda_below <= 0.0);
    }
  }
  EXPECT_EQ(curve.samples.back().kind, CriticalKind::Touch);
}

TEST(CriticalCurve, FlagsPressuresWithoutCrossing) {
  const auto model = vdw_compatible_model(VdwParams{});
  const auto curve = critical_curve_trace(model, 0.001, 0.02, 3, SweepWindow{0.3, 0.4, 100});
  EXPECT_EQ(curve.skipped.size(), 3u);
}

TEST(AndrewsPoint, RecoversVdwCriticalPoint) {
  const auto crit = oracle::vdw_critical(1.0, 1.0, 1.0);
  const auto model = vdw_compatible_model(VdwParams{});
  const auto a = andrews_point(model, AndrewsGuess{0.3, 0.3, 0.04});
  EXPECT_NEAR(a.T_C, crit.T, 1e-6);
  EXPECT_NEAR(a.p_C, crit.p, 1e-6);
  EXPECT_NEAR(a.rho_C, crit.rho, 1e-6);
  EXPECT_LT(a.residual, 1e-9);
}

TEST(AndrewsPoint, TripleRootAtSolution) {
  const auto model = vdw_compatible_model(VdwParams{});
  const auto a = andrews_point(model, AndrewsGuess{0.3, 0.3, 0.04});
  const auto set = full_steady_states({a.T_C, a.p_C}, model);
  for (const auto& e : set.equilibria) {
    EXPECT_NEAR(e.rho, a.rho_C, 1e-4);
    EXPECT_LT(std::abs(full_rhs(e.rho, {a.T_C, a.p_C}, model)), 1e-9);
  }
}

TEST(AndrewsPoint, LandauPresetPressure) {
  // The triple root makes this system ill-conditioned: the cube root of the
  // rounding error is about 1e-5.
  const auto a = andrews_point(landau(0.0), AndrewsGuess{1.1, 1.05, 1.1});
  EXPECT_NEAR(a.p_C, 1.0, 1e-4);
  EXPECT_NEAR(a.T_C, 1.0, 1e-4);
  EXPECT_LT(a.residual, 1e-9);
}

TEST(AndrewsPoint, FarGuessDoesNotConverge) {
  const auto model = vdw_compatible_model(VdwParams{});
  const auto k = kind_of([&] { andrews_point(model, AndrewsGuess{5.0, 0.9, 0.9}); });
  EXPECT_TRUE(k == ErrorKind::NoConvergence || k == ErrorKind::SingularJacobian);
}

TEST(AndrewsPoint, GuessOutsideBox) {
  const auto model = vdw_compatible_model(VdwParams{});
  EXPECT_EQ(kind_of([&] { andrews_point(model, AndrewsGuess{0.3, 500.0, 0.04}); }), ErrorKind::OutOfValidityBox);
}

TEST(SaddleNode, LinearPathClosedForm) {
  const double T0 = 2.0;
  const ReducedPath path = [&](double T) { return ReducedCoeffs{-(T - T0), 1.0, 1.0, 0.0}; };
  const auto fold = saddle_node_locate(path, T0, T0 + 1.0);
  EXPECT_NEAR(fold.s, T0 + 0.25, 1e-12);
  EXPECT_NEAR(fold.rho_offset, 0.5, 1e-12);
}

TEST(SaddleNode, MatchesRootCountBisection) {
  const double T0 = 2.0;
  const ReducedPath path = [&](double T) { return ReducedCoeffs{-(T - T0), 1.0, 1.0, 0.0}; };
  const auto fold = saddle_node_locate(path, T0, T0 + 1.0);
  // Three roots while the quadratic factor still reaches zero.
  double lo = T0, hi = T0 + 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (quadratic_peak(path(mid)) >= 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(fold.s, 0.5 * (lo + hi), 1e-10);
}

TEST(SaddleNode, PitchforkHasNoFold) {
  const ReducedPath path = [](double T) { return ReducedCoeffs{-(T - 1.0), 0.0, 1.0, 0.0}; };
  EXPECT_EQ(kind_of([&] { saddle_node_locate(path, 0.5, 1.5); }), ErrorKind::NoFoldInWindow);
  EXPECT_EQ(kind_of([] { saddle_node_locate(landau(0.0), 1.0, kLandauWindow); }), ErrorKind::NoFoldInWindow);
}

TEST(SaddleNode, LandauFoldOnIsobar) {
  const auto sn = saddle_node_locate(landau(0.5), 1.5, kLandauWindow);
  EXPECT_NEAR(sn.T, 1.0 + (8.0 - std::sqrt(48.0)) / 32.0, 1e-9);
  const auto rc = reduced_coefficients(1.0, {sn.T, sn.p}, landau(0.5));
  EXPECT_NEAR(rc.discriminant(), 0.0, 1e-10);
  EXPECT_NEAR(sn.rho_offset, rc.a2 / (2.0 * rc.a3), 1e-8);
  EXPECT_NEAR(sn.rho, 1.0 + sn.rho_offset, 1e-12);
  const auto set = reduced_steady_states(rc, 1e-6);
  EXPECT_EQ(set.size(), 2u);
}

TEST(SaddleNode, VdwIsobarFoldIsLiquidSpinodal) {
  const auto model = vdw_compatible_model(VdwParams{});
  const auto sn = saddle_node_locate(model, 0.02, kVdwWindow);
  // The isotherm through the fold has its liquid-side minimum at p = 0.02.
  const double T = sn.T;
  auto dpdv = [&](double v) { return -T / ((v - 1.0) * (v - 1.0)) + 2.0 / (v * v * v); };
  const auto ext = oracle::scan_roots(dpdv, 1.01, 20.0, 100000);
  ASSERT_EQ(ext.size(), 2u);
  EXPECT_NEAR(vdw_pressure(ext[0], T, VdwParams{}), 0.02, 1e-9);
  EXPECT_NEAR(sn.rho, 1.0 / ext[0], 1e-7);
  const auto curve = critical_curve_trace(model, 0.02, 0.02, 1, kVdwWindow);
  EXPECT_GT(sn.T, curve.samples.at(0).T);
}

TEST(SaddleNode, VdwIsothermPressureSlice) {
  const auto model = vdw_compatible_model(VdwParams{});
  const double T = 0.27;
  const auto sn = saddle_node_locate_pressure(model, T, 0.001, 0.06);
  auto dpdv = [&](double v) { return -T / ((v - 1.0) * (v - 1.0)) + 2.0 / (v * v * v); };
  const auto ext = oracle::scan_roots(dpdv, 1.01, 20.0, 100000);
  ASSERT_EQ(ext.size(), 2u);
  const double p_liquid = vdw_pressure(ext[0], T, VdwParams{});
  const double p_gas = vdw_pressure(ext[1], T, VdwParams{});
  EXPECT_NEAR(sn.p, p_liquid, 1e-9);
  EXPECT_LT(sn.p, p_gas);
}

TEST(TransitionFunctions, ContinuousCaseFollowsSquareRoot) {
  const auto model = landau(0.0);
  const TransitionFunctions tf(model, 1.0, kLandauWindow);
  EXPECT_NEAR(tf.T0(), 1.0, 1e-10);
  ASSERT_TRUE(tf.T_star().has_value());
  EXPECT_NEAR(*tf.T_star(), tf.T0(), 1e-12);
  for (double T : {0.9, 0.95, 0.99}) {
    const auto rc = reduced_coefficients(1.0, {T, 1.0}, model);
    const double r = std::sqrt(rc.lambda / rc.a3);
    EXPECT_NEAR(*tf.phi_plus(T), 1.0 + r, 1e-9);
    EXPECT_NEAR(*tf.phi_minus(T), 1.0 - r, 1e-9);
  }
  for (double T : {1.01, 1.1}) {
    EXPECT_NEAR(*tf.phi_plus(T), 1.0, 1e-10);
    EXPECT_NEAR(*tf.phi_minus(T), 1.0, 1e-10);
  }
  EXPECT_NEAR(*tf.phi_plus(1.0 - 1e-8), 1.0, 2e-4);
}

TEST(TransitionFunctions, FirstOrderJumpAtMaxwellTemperature) {
  const auto model = landau(0.5);
  const TransitionFunctions tf(model, 1.5, kLandauWindow);
  ASSERT_TRUE(tf.T_star().has_value());
  ASSERT_TRUE(tf.T1().has_value());
  const double Ts = *tf.T_star();
  EXPECT_LE(tf.T0(), Ts);
  EXPECT_LT(Ts, *tf.T1());

  // Independent energy-crossing bisection between the two stable states.
  auto gap = [&](double T) {
    const auto rc = reduced_coefficients(1.0, {T, 1.5}, model);
    const double rp = (rc.a2 + std::sqrt(rc.discriminant())) / (2.0 * rc.a3);
    return gibbs_reduced(1.0 + rp, {T, 1.5}, model) - gibbs_reduced(1.0, {T, 1.5}, model);
  };
  const double T_cross = oracle::bisect(gap, 1.0 + 1e-9, *tf.T1() - 1e-9);
  EXPECT_NEAR(Ts, T_cross, 1e-9);

  const double jump = *tf.phi_plus(Ts - 1e-9) - *tf.phi_plus(Ts + 1e-9);
  const auto rc = reduced_coefficients(1.0, {Ts, 1.5}, model);
  EXPECT_NEAR(jump, 2.0 * rc.a2 / (3.0 * rc.a3), 1e-6);
  EXPECT_GT(jump, 0.5 * rc.a2 / rc.a3);
  EXPECT_LT(jump, rc.a2 / rc.a3);
}

TEST(TransitionFunctions, TablesCarryWindowData) {
  const auto [plus, minus] = transition_functions(landau(0.5), 1.5, kLandauWindow, 61);
  EXPECT_EQ(plus.branch, Branch::Plus);
  EXPECT_EQ(minus.branch, Branch::Minus);
  EXPECT_EQ(plus.samples.size(), 61u);
  ASSERT_TRUE(plus.T_star.has_value());
  ASSERT_TRUE(plus.T1.has_value());
  EXPECT_LE(plus.T0, *plus.T_star);
  EXPECT_LT(*plus.T_star, *plus.T1);
  int jumps = 0;
  for (std::size_t i = 1; i < plus.samples.size(); ++i) {
    if (std::abs(plus.samples[i].second - plus.samples[i - 1].second) > 0.1) ++jumps;
  }
  EXPECT_EQ(jumps, 1);
}

TEST(MetastableWindow, MatchesCurveAndFold) {
  const auto model = landau(0.5);
  const auto w = metastable_window(model, 1.5, kLandauWindow, 11);
  const auto curve = critical_curve_trace(model, 1.5, 1.5, 1, kLandauWindow);
  const auto sn = saddle_node_locate(model, 1.5, kLandauWindow);
  EXPECT_NEAR(w.T0, curve.samples.at(0).T, 1e-9);
  EXPECT_NEAR(w.T1, sn.T, 1e-9);
  for (const auto& s : w.samples) {
    if (s.T > w.T0 + 1e-6 && s.T < w.T1 - 1e-6) {
      EXPECT_EQ(s.stable_count, 2);
      EXPECT_LT(s.rho_gas, s.rho_separatrix);
      EXPECT_LT(s.rho_separatrix, s.rho_liquid);
    }
  }
  const auto beyond = full_steady_states({w.T1 + 0.01, 1.5}, model);
  EXPECT_EQ(beyond.stable_count(), 1);
  const auto inside = full_steady_states({0.5 * (w.T0 + w.T1), 1.5}, model);
  EXPECT_EQ(inside.size(), 3u);
  EXPECT_EQ(inside.stable_count(), 2);
}

TEST(MetastableWindow, RequiresPositiveQuadratic) {
  EXPECT_EQ(kind_of([] { metastable_window(landau(0.0), 1.0, kLandauWindow); }), ErrorKind::NotFirstOrder);
}

TEST(Bifurcation, PitchforkIsSymmetric) {
  const auto rows = bifurcation_diagram(landau(0.0), 1.0, kLandauWindow, 31);
  int pairs = 0;
  for (const auto& r : rows) {
    if (r.branch != Branch::Plus || !r.marker.empty()) continue;
    for (const auto& q : rows) {
      if (q.T == r.T && q.branch == Branch::Minus) {
        EXPECT_NEAR((r.rho - 1.0) + (q.rho - 1.0), 0.0, 1e-10);
        EXPECT_GT(r.lambda, 0.0);
        ++pairs;
      }
    }
  }
  EXPECT_GT(pairs, 5);
}

TEST(Bifurcation, FoldMarkerAtClosedFormLambda) {
  const auto model = landau(0.5);
  const auto rows = bifurcation_diagram(model, 1.5, kLandauWindow, 31);
  int folds = 0, criticals = 0;
  for (const auto& r : rows) {
    if (r.marker == "fold") {
      const auto rc = reduced_coefficients(1.0, {r.T, 1.5}, model);
      EXPECT_NEAR(r.lambda, -rc.a2 * rc.a2 / (4.0 * rc.a3), 1e-9);
      ++folds;
    }
    if (r.marker == "critical") {
      EXPECT_NEAR(r.lambda, 0.0, 1e-10);
      ++criticals;
    }
  }
  EXPECT_EQ(folds, 1);
  EXPECT_EQ(criticals, 1);
}
