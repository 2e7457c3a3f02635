#include <gtest/gtest.h>

#include <cmath>

#include "qpse/errors.hpp"
#include "qpse/norms.hpp"
#include "qpse/oracle/oracle.hpp"
#include "qpse/pm/pm.hpp"
#include "solver_fixtures.hpp"

using namespace qpse;
using namespace qpse::pm;
using qpse::testing::decay_state;
using qpse::testing::random_state;
using qpse::testing::sqrt3_potential;
using qpse::testing::sqrt3_projection;

namespace {

double table_diff(const LatticeTable& a, const LatticeTable& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double table_norm(const LatticeTable& a) {
  double s = 0.0;
  for (auto v : a.values()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

TEST(PmPlan, FreePotentialHasUnitPhases) {
  auto p = sqrt3_projection();
  PmPlan plan(PotentialSpec(SpectralState(p), true), 4, 1e-2);
  for (auto v : plan.potential_phases()) EXPECT_EQ(v, Complex(1.0));
}

TEST(PmPlan, Sqrt3PotentialPhases) {
  auto p = sqrt3_projection();
  const double tau = 1e-2;
  PmPlan plan(sqrt3_potential(p), 4, tau);
  torus::TorusGrid g{2, 4};
  std::vector<double> y(2);
  for (std::size_t q = 0; q < g.size(); ++q) {
    g.point(q, y);
    const Complex expect = std::polar(1.0, -tau * 2.0 * (std::cos(y[0]) + std::cos(y[1])));
    EXPECT_NEAR(std::abs(plan.potential_phases()[q] - expect), 0.0, 1e-15);
  }
}

TEST(PmPlan, ZeroStepIsIdentity) {
  auto p = sqrt3_projection();
  PmPlan plan(sqrt3_potential(p), 4, 0.0);
  for (auto v : plan.potential_phases()) EXPECT_EQ(v, Complex(1.0));
  for (auto v : plan.kinetic_phases()) EXPECT_EQ(v, Complex(1.0));
  auto t = torus::embed_state(random_state(p, 4, 1), 4);
  EXPECT_LT(table_diff(pm_step(t, plan), t), 1e-14 * table_norm(t));
}

TEST(PmPlan, UnderResolvedPotentialThrows) {
  auto p = sqrt3_projection();
  auto V = PotentialSpec(SpectralState::from_modes(p, {{{3, 0}, 1.0}, {{-3, 0}, 1.0}}), true);
  EXPECT_THROW(PmPlan(V, 2, 1e-3), TruncationError);
  PmOptions o;
  o.potential_embedding = torus::EmbedMode::Alias;
  EXPECT_NO_THROW(PmPlan(V, 2, 1e-3, o));
}

TEST(PmStep, FreeSingleModeIsExact) {
  auto p = sqrt3_projection();
  const double tau = 0.37;
  PmPlan plan(PotentialSpec(SpectralState(p), true), 4, tau);
  auto u = SpectralState::from_modes(p, {{{2, -3}, 1.0}});
  auto t = pm_step(torus::embed_state(u, 4), plan);
  const int k0[] = {2, -3};
  const Complex expect = std::polar(1.0, -tau * p->wavevector_norm2(k0));
  EXPECT_NEAR(std::abs(t.at(k0) - expect), 0.0, 1e-14);

  auto zero = SpectralState::from_modes(p, {{{0, 0}, Complex(0.5, 0.5)}});
  auto tz = pm_step(torus::embed_state(zero, 4), plan);
  const int z[] = {0, 0};
  EXPECT_NEAR(std::abs(tz.at(z) - Complex(0.5, 0.5)), 0.0, 1e-15);
}

TEST(PmStep, ShapeMismatchThrows) {
  auto p = sqrt3_projection();
  PmPlan plan(sqrt3_potential(p), 4, 1e-3);
  LatticeTable t(LatticeIndexSet(2, 2));
  EXPECT_THROW(pm_step(t, plan), DimensionError);
}

TEST(PmStep, LocalErrorAgainstOracleIsThirdOrder) {
  // D = 16 torus; the PM scheme is a Strang splitting of the collocation
  // Hamiltonian, so one step differs from exp(-i tau H) by O(tau^3).
  auto p = sqrt3_projection();
  auto V = sqrt3_potential(p);
  const int N = 2;
  LatticeIndexSet box(2, N);
  auto H = oracle::build_hamiltonian(V, *p, box, oracle::Coupling::Collocation);
  auto u = random_state(p, N, 11);
  auto t0 = torus::embed_state(u, N);
  oracle::Vector v0(static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i) v0(static_cast<Eigen::Index>(i)) = t0[i];

  std::vector<double> errs;
  for (double tau : {1e-2, 5e-3, 2.5e-3}) {
    PmPlan plan(V, N, tau);
    auto t1 = pm_step(t0, plan);
    auto ex = oracle::exact_propagate(v0, H, tau);
    double e = 0.0;
    for (std::size_t i = 0; i < box.size(); ++i) e += std::norm(t1[i] - ex(static_cast<Eigen::Index>(i)));
    errs.push_back(std::sqrt(e));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double order = std::log(errs[i - 1] / errs[i]) / std::log(2.0);
    EXPECT_NEAR(order, 3.0, 0.15);
  }
}

TEST(PmPropagate, NormConservation) {
  auto p = sqrt3_projection();
  auto u = decay_state(p, 8);
  auto r = pm_propagate(u, sqrt3_potential(p), 16, 1e-3, 1000);
  ASSERT_EQ(r.trajectory.records.size(), 1001u);
  const double n0 = r.trajectory.records.front().l2_norm;
  for (const auto& rec : r.trajectory.records) EXPECT_LT(std::abs(rec.l2_norm - n0), 1e-12);
  EXPECT_NEAR(r.trajectory.records.back().time, 1.0, 1e-12);
}

TEST(PmPropagate, TimeReversal) {
  auto p = sqrt3_projection();
  auto V = sqrt3_potential(p);
  auto u = random_state(p, 8, 5);
  auto fwd = pm_propagate(u, V, 8, 1e-2, 50);
  auto back = pm_propagate(fwd.state, V, 8, -1e-2, 50);
  EXPECT_LT(l2_norm(state_axpy(-1.0, u, back.state)), 1e-12 * l2_norm(u));
}

TEST(PmPropagate, FreeSolutionAfterOneStep) {
  auto p = sqrt3_projection();
  auto u = random_state(p, 4, 8);
  const double tau = 0.25;
  auto r = pm_propagate(u, PotentialSpec(SpectralState(p), true), 4, tau, 1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Complex expect = u.value(i) * std::polar(1.0, -tau * p->wavevector_norm2(u.index(i)));
    EXPECT_NEAR(std::abs(r.state.coefficient(u.index(i)) - expect), 0.0, 1e-13);
  }
  EXPECT_THROW(pm_propagate(u, PotentialSpec(SpectralState(p), true), 4, tau, 0), InvalidArgument);
}

TEST(PmPropagate, FusedKineticMatchesPlainLoop) {
  auto p = sqrt3_projection();
  auto V = sqrt3_potential(p);
  auto u = random_state(p, 8, 9);
  PmOptions fused;
  fused.fuse_half_kinetic = true;
  auto a = pm_propagate(u, V, 8, 1e-2, 40, 7);
  auto b = pm_propagate(u, V, 8, 1e-2, 40, 7, fused);
  EXPECT_LT(table_diff(a.table, b.table), 1e-13 * table_norm(a.table));
  ASSERT_EQ(a.trajectory.records.size(), b.trajectory.records.size());
}

TEST(PmPropagate, ObserverAndCheckpointCadence) {
  auto p = sqrt3_projection();
  std::vector<std::size_t> seen;
  auto r = pm_propagate(decay_state(p, 4), sqrt3_potential(p), 4, 1e-3, 10, 4, {},
                        [&](std::size_t m, const LatticeTable&) { seen.push_back(m); });
  EXPECT_EQ(seen, (std::vector<std::size_t>{4, 8, 10}));
  EXPECT_EQ(r.trajectory.records.size(), 4u);
  EXPECT_EQ(r.trajectory.method, MethodTag::PM);
}

TEST(PmPropagate, ProjectionMismatchThrows) {
  auto p = sqrt3_projection();
  auto q = make_projection(1, 2, {1.0, std::sqrt(2.0)});
  EXPECT_THROW(pm_propagate(decay_state(q, 2), sqrt3_potential(p), 4, 1e-3, 1), ProjectionMismatch);
}
