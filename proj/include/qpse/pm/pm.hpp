#pragma once

#include <cstddef>
#include <functional>
#include <memory>

#include "qpse/aligned.hpp"
#include "qpse/lattice.hpp"
#include "qpse/potential.hpp"
#include "qpse/torus/torus.hpp"
#include "qpse/trajectory.hpp"

namespace qpse::pm {

struct PmOptions {
  /// c in i u_t = -c Delta u + V u; the kinetic phase is exp(-i tau/2 c ||P k||^2).
  double kinetic_coefficient = 1.0;
  /// Merge the trailing half kinetic phase of one step with the leading one
  /// of the next inside pm_propagate. Off by default: each step is then the
  /// scheme as written and intermediate tables are exact step outputs.
  bool fuse_half_kinetic = false;
  torus::EmbedMode state_embedding = torus::EmbedMode::Strict;
  torus::EmbedMode potential_embedding = torus::EmbedMode::Strict;
  torus::PlannerRigor planner = torus::PlannerRigor::Estimate;
};

/// Precomputed phases for one (V, P, N, tau). Immutable once built.
class PmPlan {
 public:
  PmPlan(const PotentialSpec& V, int N, double tau, const PmOptions& options = {});

  std::size_t n() const noexcept { return box_.n(); }
  int N() const noexcept { return box_.N(); }
  double tau() const noexcept { return tau_; }
  const LatticeIndexSet& box() const noexcept { return box_; }
  const ProjectionPtr& projection() const noexcept { return projection_; }
  const torus::TorusTransform& transform() const noexcept { return *transform_; }

  /// exp(-i tau/2 c ||P k||^2), table order.
  std::span<const Complex> kinetic_phases() const noexcept { return kinetic_; }
  /// exp(-i tau V_p(y_j)), grid order.
  std::span<const Complex> potential_phases() const noexcept { return potential_; }

 private:
  LatticeIndexSet box_;
  double tau_;
  ProjectionPtr projection_;
  std::shared_ptr<const torus::TorusTransform> transform_;
  AlignedVector<Complex> kinetic_;
  AlignedVector<Complex> potential_;
};

/// One PM-OS2 step in place: kinetic half phase, inverse DFT, potential phase,
/// forward DFT, kinetic half phase.
void pm_step_in_place(LatticeTable& state, const PmPlan& plan);
LatticeTable pm_step(const LatticeTable& state, const PmPlan& plan);

/// Called after every recorded step with the step number and current table.
using StepObserver = std::function<void(std::size_t step, const LatticeTable& state)>;

/// M steps from embed_state(u0, N). A trajectory record (L2 norm, wall time)
/// is written at step 0, every checkpoint_every steps and at step M.
PropagationResult pm_propagate(const SpectralState& u0, const PotentialSpec& V, int N, double tau,
                               std::size_t M, std::size_t checkpoint_every = 1, const PmOptions& options = {},
                               const StepObserver& observer = {});

/// The same loop from an existing table and plan.
PropagationResult pm_propagate_table(LatticeTable state, const PmPlan& plan, std::size_t M,
                                     std::size_t checkpoint_every = 1, bool fuse_half_kinetic = false,
                                     const StepObserver& observer = {});

}  // namespace qpse::pm
