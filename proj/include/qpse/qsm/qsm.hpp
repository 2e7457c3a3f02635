#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

#include "qpse/lattice.hpp"
#include "qpse/potential.hpp"
#include "qpse/torus/torus.hpp"
#include "qpse/trajectory.hpp"

namespace qpse::qsm {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense D x D matrix with entry (j, l) = V at lattice index k_j - k_l.
struct PotentialMatrix {
  LatticeIndexSet box;
  Matrix entries;
};

PotentialMatrix build_potential_matrix(const PotentialSpec& V, const LatticeIndexSet& K);

/// sum_{j=0}^{order} (-i tau A)^j / j! by Horner's rule,
/// I + X (I + X/2 (I + ... (I + X/order))), using order - 1 matrix products.
Matrix taylor_exp(const Matrix& A, double tau, int order);

struct QsmOptions {
  /// c in i u_t = -c Delta u + V u.
  double kinetic_coefficient = 1.0;
  int taylor_order = 5;
  torus::EmbedMode state_embedding = torus::EmbedMode::Strict;
};

/// Kinetic phases and the truncated exponential for one (V, N, tau).
class QsmPropagator {
 public:
  QsmPropagator(const PotentialSpec& V, int N, double tau, const QsmOptions& options = {});

  const LatticeIndexSet& box() const noexcept { return box_; }
  const ProjectionPtr& projection() const noexcept { return projection_; }
  double tau() const noexcept { return tau_; }
  int taylor_order() const noexcept { return order_; }
  const Vector& kinetic_phases() const noexcept { return kinetic_; }
  const Matrix& expV() const noexcept { return expV_; }
  /// Operator norm (largest singular value) of the potential matrix.
  double potential_operator_norm() const;
  const Matrix& potential_matrix() const noexcept { return potential_; }

  /// Seconds spent assembling the matrix and in taylor_exp.
  double build_seconds() const noexcept { return build_seconds_; }
  double exp_seconds() const noexcept { return exp_seconds_; }

 private:
  LatticeIndexSet box_;
  ProjectionPtr projection_;
  double tau_;
  int order_;
  Vector kinetic_;
  Matrix potential_;
  Matrix expV_;
  double build_seconds_ = 0.0;
  double exp_seconds_ = 0.0;
};

/// kinetic .* (expV * (kinetic .* c)).
Vector qsm_step(const Vector& c, const QsmPropagator& prop);
/// In place, using `work` as scratch of the same length.
void qsm_step(Vector& c, Vector& work, const QsmPropagator& prop);

using StepObserver = std::function<void(std::size_t step, const Vector& state)>;

/// Coefficient vector <-> table (identical lexicographic layout).
Vector to_vector(const LatticeTable& table);
LatticeTable to_table(const Vector& v, const LatticeIndexSet& box);

PropagationResult qsm_propagate(const SpectralState& u0, const PotentialSpec& V, int N, double tau, std::size_t M,
                                std::size_t checkpoint_every = 1, const QsmOptions& options = {},
                                const StepObserver& observer = {});

PropagationResult qsm_propagate_vector(Vector c, const QsmPropagator& prop, std::size_t M,
                                       std::size_t checkpoint_every = 1, const StepObserver& observer = {});

}  // namespace qpse::qsm
