#include "qpse/pm/pm.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "qpse/errors.hpp"
#include "qpse/norms.hpp"

namespace qpse::pm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double table_norm(const LatticeTable& t) {
  double s = 0.0;
  for (const Complex& c : t.values()) s += std::norm(c);
  return std::sqrt(s);
}

void multiply(std::span<Complex> data, std::span<const Complex> factors) {
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factors[i];
}

}  // namespace

PmPlan::PmPlan(const PotentialSpec& V, int N, double tau, const PmOptions& options)
    : box_(V.n(), N), tau_(tau), projection_(V.projection()) {
  if (!std::isfinite(tau)) throw InvalidArgument("time step must be finite");
  transform_ = std::make_shared<const torus::TorusTransform>(box_.n(), N, options.planner);

  kinetic_.resize(box_.size());
  std::vector<int> k(box_.n());
  const double half = 0.5 * tau * options.kinetic_coefficient;
  for (std::size_t p = 0; p < box_.size(); ++p) {
    box_.index(p, k);
    kinetic_[p] = std::polar(1.0, -half * projection_->wavevector_norm2(k));
  }

  // V_p on the grid, then exp(-i tau V_p). For a complex V the phase factor
  // is not unimodular and is computed as exp of the complex argument.
  LatticeTable vtable = torus::embed_state(V.modes(), N, options.potential_embedding);
  torus::TorusField vp = torus::inverse_dft(vtable, *transform_);
  potential_.resize(box_.size());
  const bool real = V.is_real();
  for (std::size_t q = 0; q < vp.size(); ++q) {
    if (real) {
      potential_[q] = std::polar(1.0, -tau * vp[q].real());
    } else {
      potential_[q] = std::exp(Complex(0.0, -tau) * vp[q]);
    }
  }
}

void pm_step_in_place(LatticeTable& state, const PmPlan& plan) {
  if (!(state.box() == plan.box())) throw DimensionError("state table and PM plan have different boxes");
  auto v = state.values();
  const auto& t = plan.transform();
  multiply(v, plan.kinetic_phases());
  // (-1)^(sum j) factors from the k-ordered layout cancel between the inverse
  // and forward transforms, so the raw FFTs are enough here.
  t.backward_raw(v);
  multiply(v, plan.potential_phases());
  t.forward_raw(v);
  const double scale = 1.0 / static_cast<double>(v.size());
  const auto kin = plan.kinetic_phases();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= kin[i] * scale;
}

LatticeTable pm_step(const LatticeTable& state, const PmPlan& plan) {
  LatticeTable out = state;
  pm_step_in_place(out, plan);
  return out;
}

PropagationResult pm_propagate_table(LatticeTable state, const PmPlan& plan, std::size_t M,
                                     std::size_t checkpoint_every, bool fuse_half_kinetic,
                                     const StepObserver& observer) {
  if (M < 1) throw InvalidArgument("step count M must be at least 1");
  if (checkpoint_every < 1) checkpoint_every = 1;
  if (!(state.box() == plan.box())) throw DimensionError("state table and PM plan have different boxes");

  Trajectory traj;
  traj.method = MethodTag::PM;
  traj.records.push_back({0, 0.0, table_norm(state), 0.0});

  const auto kin = plan.kinetic_phases();
  AlignedVector<Complex> full_kin;
  if (fuse_half_kinetic) {
    full_kin.resize(kin.size());
    for (std::size_t i = 0; i < kin.size(); ++i) full_kin[i] = kin[i] * kin[i];
  }
  const auto& t = plan.transform();
  const double scale = 1.0 / static_cast<double>(state.size());

  const auto start = Clock::now();
  auto v = state.values();
  // In the fused loop the state is complete (both half phases applied) only
  // at recorded steps; otherwise the next step opens with a full phase.
  bool complete = true;
  for (std::size_t m = 1; m <= M; ++m) {
    const bool record = (m % checkpoint_every == 0) || m == M;
    if (!fuse_half_kinetic) {
      pm_step_in_place(state, plan);
    } else {
      multiply(v, complete ? kin : std::span<const Complex>(full_kin));
      t.backward_raw(v);
      multiply(v, plan.potential_phases());
      t.forward_raw(v);
      for (auto& c : v) c *= scale;
      complete = record;
      if (record) multiply(v, kin);
    }
    if (record) {
      traj.records.push_back({m, static_cast<double>(m) * plan.tau(), table_norm(state), seconds_since(start)});
      if (observer) observer(m, state);
    }
  }
  const double elapsed = seconds_since(start);

  PropagationResult result{SpectralState::from_table(plan.projection(), state), std::move(state), std::move(traj),
                           0.0, elapsed};
  return result;
}

PropagationResult pm_propagate(const SpectralState& u0, const PotentialSpec& V, int N, double tau, std::size_t M,
                               std::size_t checkpoint_every, const PmOptions& options,
                               const StepObserver& observer) {
  if (!same_projection(u0.projection(), V.projection())) {
    throw ProjectionMismatch("initial state and potential use different projection matrices");
  }
  if (M < 1) throw InvalidArgument("step count M must be at least 1");
  const auto setup_start = Clock::now();
  PmPlan plan(V, N, tau, options);
  LatticeTable table = torus::embed_state(u0, N, options.state_embedding);
  const double setup = seconds_since(setup_start);
  PropagationResult r =
      pm_propagate_table(std::move(table), plan, M, checkpoint_every, options.fuse_half_kinetic, observer);
  r.setup_seconds = setup;
  return r;
}

}  // namespace qpse::pm
