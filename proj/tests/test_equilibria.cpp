#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pvt/equilibria.hpp"
#include "pvt/error.hpp"

using namespace pvt;

namespace {

std::vector<double> rhos(const EquilibriumSet& set) {
  std::vector<double> out;
  for (const auto& e : set.equilibria) out.push_back(e.rho);
  return out;
}

Equilibrium eq(double rho, Stability stability) {
  Equilibrium e;
  e.rho = rho;
  e.stability = stability;
  return e;
}

}  // namespace

TEST(ReducedSteadyStates, SymmetricPitchfork) {
  const auto set = reduced_steady_states(ReducedCoeffs{1.0, 0.0, 1.0, 0.0});
  ASSERT_EQ(set.size(), 3u);
  EXPECT_NEAR(set.equilibria[0].rho, -1.0, 1e-15);
  EXPECT_NEAR(set.equilibria[1].rho, 0.0, 1e-15);
  EXPECT_NEAR(set.equilibria[2].rho, 1.0, 1e-15);
  EXPECT_TRUE(set.equilibria[0].stable());
  EXPECT_FALSE(set.equilibria[1].stable());
  EXPECT_TRUE(set.equilibria[2].stable());
  EXPECT_EQ(set.equilibria[0].branch, Branch::Minus);
  EXPECT_EQ(set.equilibria[1].branch, Branch::Zero);
  EXPECT_EQ(set.equilibria[2].branch, Branch::Plus);
}

TEST(ReducedSteadyStates, BistableMatchesScan) {
  const ReducedCoeffs rc{-0.21, 1.0, 1.0, 0.0};
  const auto set = reduced_steady_states(rc);
  const auto scan = oracle::scan_roots([&](double r) { return rc.rhs(r); }, -10.0, 10.0);
  ASSERT_EQ(set.size(), scan.size());
  for (std::size_t i = 0; i < scan.size(); ++i) EXPECT_NEAR(set.equilibria[i].rho, scan[i], 1e-9);
  EXPECT_NEAR(set.equilibria[1].rho, 0.3, 1e-12);
  EXPECT_NEAR(set.equilibria[2].rho, 0.7, 1e-12);
  EXPECT_TRUE(set.equilibria[0].stable());
  EXPECT_FALSE(set.equilibria[1].stable());
  EXPECT_TRUE(set.equilibria[2].stable());
}

TEST(ReducedSteadyStates, NegativeDiscriminantLeavesZeroOnly) {
  const auto set = reduced_steady_states(ReducedCoeffs{-0.5, 1.0, 1.0, 0.0});
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.equilibria[0].rho, 0.0);
  EXPECT_TRUE(set.equilibria[0].stable());
  EXPECT_DOUBLE_EQ(set.discriminant, -1.0);
}

TEST(ReducedSteadyStates, DoubleRootCarriesMultiplicity) {
  const auto set = reduced_steady_states(ReducedCoeffs{-0.25, 1.0, 1.0, 0.0});
  ASSERT_EQ(set.size(), 2u);
  EXPECT_NEAR(set.equilibria[1].rho, 0.5, 1e-15);
  EXPECT_EQ(set.equilibria[1].multiplicity, 2);
}

TEST(ReducedSteadyStates, RejectsNonPositiveCubic) {
  EXPECT_THROW(reduced_steady_states(ReducedCoeffs{0.1, 0.2, 0.0, 0.0}), Error);
}

TEST(FullSteadyStates, TripleRootAtVdwCriticalPoint) {
  const auto crit = oracle::vdw_critical(1.0, 1.0, 1.0);
  const auto model = vdw_compatible_model(VdwParams{});
  const auto set = full_steady_states({crit.T, crit.p}, model);
  ASSERT_GE(set.size(), 1u);
  for (const auto& e : set.equilibria) EXPECT_NEAR(e.rho, crit.rho, 1e-4);
  int total = 0;
  for (const auto& e : set.equilibria) total += e.multiplicity;
  EXPECT_EQ(total, 3);
}

TEST(FullSteadyStates, SubcriticalIsothermHasThreeRoots) {
  const auto model = vdw_compatible_model(VdwParams{});
  const ThermoState s{0.26, 0.025};
  const auto set = full_steady_states(s, model);
  const auto scan = oracle::scan_roots([&](double r) { return full_rhs(r, s, model); }, -1.0, 1.0);
  ASSERT_EQ(set.size(), 3u);
  ASSERT_EQ(scan.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(set.equilibria[i].rho, scan[i], 1e-9);
  EXPECT_TRUE(set.equilibria[0].stable());
  EXPECT_FALSE(set.equilibria[1].stable());
  EXPECT_TRUE(set.equilibria[2].stable());
}

TEST(FullSteadyStates, MonotoneCubicHasOneRoot) {
  // -rho - rho^3 = 0
  const CoefficientValues cv{1.0, 0.0, 1.0, 1.0, 0.0, 0.0};
  auto set = full_steady_states({1e-9, 0.0}, cv);
  ASSERT_EQ(set.size(), 1u);
  EXPECT_NEAR(set.equilibria[0].rho, 0.0, 1e-12);
  EXPECT_TRUE(set.equilibria[0].stable());
}

TEST(FullSteadyStates, ResidualBelowTolerance) {
  auto g = oracle::rng(21);
  const auto model = vdw_compatible_model(VdwParams{});
  for (int i = 0; i < 200; ++i) {
    const ThermoState s{oracle::uniform(g, 0.15, 0.45), oracle::uniform(g, 0.005, 0.06)};
    for (const auto& e : full_steady_states(s, model).equilibria) {
      EXPECT_LT(std::abs(full_rhs(e.rho, s, model)), 1e-10);
      EXPECT_EQ(e.stable(), e.fprime < 0.0);
    }
  }
}

TEST(CoupledJacobian, DecoupledCaseIsTriangular) {
  auto model = constant_model(CoefficientValues{0.5, 1.0, 1.0, 2.0, 0.0, 0.0});
  const ThermoState s{1.0, 0.2};
  const double rho = 0.3;
  const auto eigs = coupled_jacobian_eigs(rho, eliminate_entropy(rho, s, model), s, model);
  const double fprime = -0.5 + 2.0 * rho - 3.0 * rho * rho;
  std::vector<double> got{eigs.first.real(), eigs.second.real()};
  std::vector<double> want{fprime, -2.0};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_NEAR(got[0], want[0], 1e-14);
  EXPECT_NEAR(got[1], want[1], 1e-14);
}

TEST(CoupledJacobian, StableOriginHasNegativeEigenvalues) {
  auto model = constant_model(CoefficientValues{0.0, 1.0, 2.0, 1.0, 0.3, 0.0});
  const ThermoState s{1.0, 0.5};
  const auto eigs = coupled_jacobian_eigs(0.0, s.T / 1.0, s, model);
  EXPECT_LT(eigs.first.real(), 0.0);
  EXPECT_LT(eigs.second.real(), 0.0);
}

TEST(CoupledJacobian, TraceIsDiagonalSum) {
  auto g = oracle::rng(22);
  const auto model = vdw_compatible_model(VdwParams{});
  for (int i = 0; i < 50; ++i) {
    const ThermoState s{oracle::uniform(g, 0.15, 0.45), oracle::uniform(g, 0.005, 0.06)};
    const double rho = oracle::uniform(g, 0.0, 0.9);
    const double S = oracle::uniform(g, -1.0, 1.0);
    const auto J = coupled_jacobian(rho, S, s, model);
    const auto eigs = coupled_jacobian_eigs(rho, S, s, model);
    EXPECT_NEAR(eigs.trace, J[0][0] + J[1][1], 1e-14);
    EXPECT_NEAR((eigs.first + eigs.second).real(), eigs.trace, 1e-12);
  }
}

TEST(CoupledJacobian, SteadyStateStabilityMatchesScalarFlow) {
  const auto model = vdw_compatible_model(VdwParams{});
  const ThermoState s{0.26, 0.025};
  for (const auto& e : full_steady_states(s, model).equilibria) {
    const auto eigs = coupled_jacobian_eigs(e.rho, eliminate_entropy(e.rho, s, model), s, model);
    const bool both_negative = eigs.first.real() < 0.0 && eigs.second.real() < 0.0;
    EXPECT_EQ(both_negative, e.stable());
  }
}

TEST(GasBranchSelect, SmallestStableRoot) {
  EquilibriumSet set;
  set.equilibria = {eq(0.1, Stability::Stable), eq(0.4, Stability::Unstable), eq(0.9, Stability::Stable)};
  EXPECT_EQ(gas_branch_select(set), 0.1);
}

TEST(GasBranchSelect, SingleStableRoot) {
  EquilibriumSet set;
  set.equilibria = {eq(0.6, Stability::Stable)};
  EXPECT_EQ(gas_branch_select(set), 0.6);
}

TEST(GasBranchSelect, NegativeRootsOnlyWhenNothingElse) {
  EquilibriumSet set;
  set.equilibria = {eq(-0.5, Stability::Stable), eq(0.0, Stability::Unstable), eq(0.5, Stability::Stable)};
  EXPECT_EQ(gas_branch_select(set), 0.5);
  set.equilibria = {eq(-0.5, Stability::Stable), eq(-0.2, Stability::Unstable)};
  EXPECT_EQ(gas_branch_select(set), -0.5);
}

TEST(GasBranchSelect, AllUnstableThrows) {
  EquilibriumSet set;
  set.equilibria = {eq(0.2, Stability::Unstable)};
  try {
    gas_branch_select(set);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoStableRoot);
  }
}

TEST(EquilibriumSet, FindByBranch) {
  const auto set = reduced_steady_states(ReducedCoeffs{-0.21, 1.0, 1.0, 0.0});
  ASSERT_TRUE(set.find(Branch::Plus).has_value());
  EXPECT_NEAR(set.find(Branch::Plus)->rho, 0.7, 1e-12);
  EXPECT_NEAR(set.find(Branch::Minus)->rho, 0.3, 1e-12);
  EXPECT_EQ(set.stable_count(), 2);
  EXPECT_EQ(rhos(set).size(), 3u);
}
